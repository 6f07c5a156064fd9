#include "ftgr/message.hpp"

namespace ftgr {

std::string encode(const ProtocolMessage& msg) {
  if (const auto* a = std::get_if<Announce>(&msg))
    return "A" + std::to_string(a->sender) + ":" + std::to_string(a->degree);
  if (const auto* f = std::get_if<FaultEntry>(&msg)) {
    if (f->cls == EntryClass::Smite)
      return "S" + std::to_string(f->subject);
    return "F" + std::to_string(f->subject) + ":" + (f->degree ? std::to_string(*f->degree) : "");
  }
  return "OK";
}

ProtocolMessage decode_message(const std::string& text) {
  auto fail = [&]() -> ProtocolMessage {
    throw std::invalid_argument("bad message text '" + text + "'");
  };
  if (text == "OK")
    return AllOkay{};
  if (text.size() < 2)
    return fail();
  const char tag = text[0];
  const std::string body = text.substr(1);
  const auto colon = body.find(':');
  try {
    if (tag == 'S' && colon == std::string::npos)
      return FaultEntry{std::stoi(body), EntryClass::Smite, std::nullopt};
    if (colon == std::string::npos)
      return fail();
    const int first = std::stoi(body.substr(0, colon));
    const std::string rest = body.substr(colon + 1);
    if (tag == 'A')
      return Announce{first, std::stoi(rest)};
    if (tag == 'F')
      return FaultEntry{first, EntryClass::Faulty,
                        rest.empty() ? std::nullopt : std::optional<int>(std::stoi(rest))};
  } catch (const std::logic_error&) {
  }
  return fail();
}

}  // namespace ftgr
