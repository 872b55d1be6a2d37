#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "dtvcn/graph.hpp"

namespace dtvcn {

// Event logs persist as
//   {"n0":int,"rng_seed":int,
//    "events":[{"t":int,"kind":"add|rewire|delete","u":int,"v":int,"old_v":int|null}],
//    "final_nodes":int}

std::string to_json(const EventLog& log);
EventLog event_log_from_json(const std::string& text);

void save_event_log(const std::filesystem::path& path, const EventLog& log);
EventLog load_event_log(const std::filesystem::path& path);

/// Reads "u v" lines; node count is one more than the largest id seen.
GraphSnapshot read_edge_list(std::istream& in);

}  // namespace dtvcn
