#include <dtvcn/error.hpp>
#include <dtvcn/generator.hpp>
#include <dtvcn/graph_io.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace dtvcn;

TEST(EventLogJson, RoundTripsGrownLog) {
  GrowthParams p;
  p.T = 150;
  const auto r = grow(p);
  const auto back = event_log_from_json(to_json(r.log));
  EXPECT_EQ(back, r.log);
  EXPECT_EQ(replay(back, back.last_time()), r.final_graph);
}

TEST(EventLogJson, FileRoundTrip) {
  GrowthParams p;
  p.T = 40;
  p.model = GrowthModel::TVCN;
  const auto r = grow(p);
  const auto path = std::filesystem::temp_directory_path() / "dtvcn_graph_io_test.json";
  save_event_log(path, r.log);
  EXPECT_EQ(load_event_log(path), r.log);
  std::filesystem::remove(path);
}

TEST(EventLogJson, CarriesRewireOrigin) {
  EventLog log{3, 9, {{1, EventKind::Rewire, 0, 3, NodeId{1}}}};
  const auto text = to_json(log);
  EXPECT_NE(text.find("\"old_v\":1"), std::string::npos);
  EXPECT_EQ(event_log_from_json(text), log);
}

TEST(EventLogJson, RejectsMalformed) {
  EXPECT_THROW(event_log_from_json("{\"n0\": 3, \"events\": ["), Error);
  EXPECT_THROW(event_log_from_json(R"({"n0":3,"rng_seed":0,"events":[{"t":1,"kind":"bogus","u":0,"v":1}]})"),
               Error);
}

TEST(EventLogJson, MissingFileIsIoError) {
  try {
    load_event_log("/nonexistent/dir/graph.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(EdgeListIo, RoundTrip) {
  const auto g = cycle_graph(6);
  std::stringstream s;
  write_edge_list(s, g);
  EXPECT_EQ(read_edge_list(s), g);
}
