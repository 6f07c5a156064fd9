#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ftgr {

inline constexpr const char* kTraceFormat = "ftgr-trace";
inline constexpr int kTraceVersion = 1;

// Line-delimited JSON, one object per line:
//   header  {"format","version","model","n","degrees","f",...}
//   rounds  {"round","crashes","deliveries","dropped","transitions"}
//   final   {"final":{"rounds","messages","nodes":[...]}}
// Field order is fixed, so equal executions serialize to equal bytes.
class ExecutionTrace {
 public:
  std::vector<std::string>& lines() { return lines_; }
  const std::vector<std::string>& lines() const { return lines_; }
  bool empty() const { return lines_.empty(); }

  void write(std::ostream& os) const;
  static ExecutionTrace read(std::istream& is);
  std::string str() const;

  bool operator==(const ExecutionTrace&) const = default;

 private:
  std::vector<std::string> lines_;
};

}  // namespace ftgr
