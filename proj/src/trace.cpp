#include "ftgr/trace.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "ftgr/netsim.hpp"
#include "json.hpp"

namespace ftgr {

using ojson = nlohmann::ordered_json;

void ExecutionTrace::write(std::ostream& os) const {
  for (const auto& line : lines_)
    os << line << '\n';
}

ExecutionTrace ExecutionTrace::read(std::istream& is) {
  ExecutionTrace t;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty())
      t.lines_.push_back(line);
  return t;
}

std::string ExecutionTrace::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

namespace {

const char* mutation_name(Mutation m) {
  switch (m) {
    case Mutation::None: return "none";
    case Mutation::KeepLocalOnHeardOnce: return "keep-local-on-heard-once";
    case Mutation::SkipBelowIndexFold: return "skip-below-index-fold";
    case Mutation::InvertBelowIndexFold: return "invert-below-index-fold";
  }
  return "none";
}

Mutation mutation_from(const std::string& s) {
  if (s == "none")
    return Mutation::None;
  if (s == "keep-local-on-heard-once")
    return Mutation::KeepLocalOnHeardOnce;
  if (s == "skip-below-index-fold")
    return Mutation::SkipBelowIndexFold;
  if (s == "invert-below-index-fold")
    return Mutation::InvertBelowIndexFold;
  throw std::invalid_argument("unknown mutation '" + s + "'");
}

}  // namespace

std::string trace_header(const SimConfig& c) {
  ojson h;
  h["format"] = kTraceFormat;
  h["version"] = kTraceVersion;
  h["model"] = to_string(c.model);
  h["n"] = c.n;
  h["degrees"] = c.degrees;
  h["f"] = c.f;
  h["capacity_c"] = c.capacity_c;
  h["group_size"] = c.layout().group_size();
  h["strict"] = c.strict;
  h["mutation"] = mutation_name(c.protocol.mutation);
  h["seed"] = c.seed;
  h["adversary"] = c.adversary;
  return h.dump();
}

SimConfig config_from_header(const std::string& line) {
  ojson h;
  try {
    h = ojson::parse(line);
  } catch (const ojson::exception& e) {
    throw std::invalid_argument(std::string("unreadable trace header: ") + e.what());
  }
  if (!h.is_object() || h.value("format", "") != kTraceFormat)
    throw std::invalid_argument("not an ftgr trace");
  if (h.value("version", -1) != kTraceVersion)
    throw std::invalid_argument("trace version " + std::to_string(h.value("version", -1)) +
                                " is not supported (expected " + std::to_string(kTraceVersion) +
                                ")");
  try {
    SimConfig c;
    c.model = parse_model(h.at("model").get<std::string>());
    c.n = h.at("n").get<int>();
    c.degrees = h.at("degrees").get<std::vector<int>>();
    c.f = h.at("f").get<int>();
    c.capacity_c = h.at("capacity_c").get<int>();
    c.group_size = c.model == Model::NCC ? h.at("group_size").get<int>() : 0;
    c.strict = h.at("strict").get<bool>();
    c.protocol.mutation = mutation_from(h.at("mutation").get<std::string>());
    c.seed = h.at("seed").get<std::uint64_t>();
    c.adversary = h.at("adversary").get<std::string>();
    return c;
  } catch (const ojson::exception& e) {
    throw std::invalid_argument(std::string("malformed trace header: ") + e.what());
  }
}

}  // namespace ftgr
