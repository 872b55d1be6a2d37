#include "dtvcn/graph_io.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "dtvcn/error.hpp"

namespace dtvcn {

using nlohmann::json;

namespace {

const char* kind_name(EventKind k) {
  switch (k) {
    case EventKind::Add: return "add";
    case EventKind::Rewire: return "rewire";
    case EventKind::Delete: return "delete";
  }
  return "add";
}

EventKind parse_kind(const std::string& s) {
  if (s == "add") return EventKind::Add;
  if (s == "rewire") return EventKind::Rewire;
  if (s == "delete") return EventKind::Delete;
  throw Error(ErrorCode::Parse, "unknown event kind '" + s + "'");
}

}  // namespace

std::string to_json(const EventLog& log) {
  json events = json::array();
  for (const EdgeEvent& e : log.events) {
    json j;
    j["t"] = e.time;
    j["kind"] = kind_name(e.kind);
    j["u"] = e.u;
    j["v"] = e.v;
    j["old_v"] = e.old_v ? json(*e.old_v) : json(nullptr);
    events.push_back(std::move(j));
  }
  json doc;
  doc["n0"] = log.n0;
  doc["rng_seed"] = log.rng_seed;
  doc["events"] = std::move(events);
  doc["final_nodes"] = log.final_nodes();
  return doc.dump();
}

EventLog event_log_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    EventLog log;
    log.n0 = doc.at("n0").get<std::size_t>();
    log.rng_seed = doc.at("rng_seed").get<std::uint64_t>();
    for (const json& j : doc.at("events")) {
      EdgeEvent e;
      e.time = j.at("t").get<TimeStep>();
      e.kind = parse_kind(j.at("kind").get<std::string>());
      e.u = j.at("u").get<NodeId>();
      e.v = j.at("v").get<NodeId>();
      if (j.contains("old_v") && !j.at("old_v").is_null()) e.old_v = j.at("old_v").get<NodeId>();
      log.events.push_back(e);
    }
    if (doc.contains("final_nodes") && doc.at("final_nodes").get<std::size_t>() != log.final_nodes())
      throw Error(ErrorCode::Parse, "final_nodes does not match the event stream");
    return log;
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::Parse, ex.what());
  }
}

void save_event_log(const std::filesystem::path& path, const EventLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << to_json(log) << '\n';
}

EventLog load_event_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return event_log_from_json(buffer.str());
}

GraphSnapshot read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    NodeId u, v;
    if (!(ls >> u >> v)) throw Error(ErrorCode::Parse, "bad edge line '" + line + "'");
    edges.push_back({u, v});
    n = std::max<std::size_t>(n, std::max(u, v) + std::size_t{1});
  }
  return GraphSnapshot::from_edges(n, edges);
}

}  // namespace dtvcn
