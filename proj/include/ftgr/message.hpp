#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace ftgr {

// 1-based position in the globally known sorted id order.
using NodeIndex = int;

enum class EntryClass : std::uint8_t { Null, Faulty, Smite };

// Phase-1 payload <u_i, d(u_i)>.
struct Announce {
  NodeIndex sender;
  int degree;
  bool operator==(const Announce&) const = default;
};

// Rebroadcast of one faulty-list cell. Smite entries never carry a degree.
struct FaultEntry {
  NodeIndex subject;
  EntryClass cls;
  std::optional<int> degree;
  bool operator==(const FaultEntry&) const = default;
};

struct AllOkay {
  bool operator==(const AllOkay&) const = default;
};

using ProtocolMessage = std::variant<Announce, FaultEntry, AllOkay>;

struct Envelope {
  NodeIndex from;
  NodeIndex to;
  ProtocolMessage msg;
  bool operator==(const Envelope&) const = default;
};

// Compact wire text used in traces: "A<sender>:<deg>", "F<subject>:<deg>",
// "S<subject>", "OK".
std::string encode(const ProtocolMessage& msg);
ProtocolMessage decode_message(const std::string& text);

// A state the crash model cannot produce; always a harness or rule bug.
class ProtocolViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ftgr
