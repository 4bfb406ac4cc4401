#include "doctest.h"

#include <filesystem>
#include <functional>
#include <random>

#include "evfilt/events.hpp"

using namespace evfilt;

namespace {

EventStream random_stream(std::mt19937_64& rng, std::size_t n, std::uint16_t w, std::uint16_t h) {
  EventStream s{w, h, {}};
  std::int64_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    t += static_cast<std::int64_t>(rng() % 50);
    s.events.push_back({t, static_cast<std::uint16_t>(rng() % w), static_cast<std::uint16_t>(rng() % h),
                        static_cast<std::uint8_t>(rng() % 4)});
  }
  return s;
}

FormatError::Kind kind_of(const std::function<void()>& fn, std::optional<std::size_t>* index = nullptr) {
  try {
    fn();
  } catch (const FormatError& e) {
    if (index) *index = e.record();
    return e.kind();
  }
  FAIL("expected FormatError");
  return FormatError::Kind::bad_header;
}

}  // namespace

TEST_CASE("csv line maps fields directly") {
  const EventStream s = decode_csv("t,x,y,p\n1000,5,7,1\n", Geometry{640, 480});
  REQUIRE(s.size() == 1);
  CHECK(s.events[0] == Event{1000, 5, 7, 1});
  CHECK(s.width == 640);
  CHECK(s.height == 480);
}

TEST_CASE("csv geometry comment is honoured") {
  const EventStream s = decode_csv("# width=32,height=16\nt,x,y,p\n3,31,15,0\n");
  CHECK(s.width == 32);
  CHECK(s.height == 16);
  CHECK(s.events.at(0).x == 31);
}

TEST_CASE("x equal to width is out of range at index 0") {
  std::optional<std::size_t> idx;
  const auto k = kind_of([] { decode_csv("t,x,y,p\n1000,640,7,1\n", Geometry{640, 480}); }, &idx);
  CHECK(k == FormatError::Kind::out_of_range);
  REQUIRE(idx.has_value());
  CHECK(*idx == 0);

  EventStream bad{640, 480, {{1, 640, 0, 0}}};
  CHECK(kind_of([&] { decode_evt64(encode_evt64(bad)); }, &idx) == FormatError::Kind::out_of_range);
  CHECK(*idx == 0);
}

TEST_CASE("decreasing timestamps name the first offending record") {
  std::optional<std::size_t> idx;
  const auto k = kind_of([] { decode_csv("t,x,y,p\n5,0,0,0\n6,0,0,0\n4,0,0,0\n", Geometry{4, 4}); }, &idx);
  CHECK(k == FormatError::Kind::unsorted);
  CHECK(idx == std::optional<std::size_t>{2});
}

TEST_CASE("malformed inputs produce distinct error kinds") {
  CHECK(kind_of([] { decode_evt64("XXXX"); }) == FormatError::Kind::bad_header);
  CHECK(kind_of([] { decode_csv("t,x,y,p\n1,2\n", Geometry{4, 4}); }) == FormatError::Kind::bad_record);
  CHECK(kind_of([] { decode_csv("t,x,y,p\n1,2,2,4\n", Geometry{4, 4}); }) == FormatError::Kind::bad_polarity);

  EventStream s{8, 8, {{1, 1, 1, 1}, {2, 2, 2, 0}}};
  std::string bytes = encode_evt64(s);
  bytes.resize(bytes.size() - 3);
  CHECK(kind_of([&] { decode_evt64(bytes); }) == FormatError::Kind::truncated);
}

TEST_CASE("empty payload with a valid header decodes to zero events") {
  const EventStream empty{640, 480, {}};
  const EventStream back = decode_evt64(encode_evt64(empty));
  CHECK(back.empty());
  CHECK(back.width == 640);
  CHECK(decode_csv(encode_csv(empty)).empty());
}

TEST_CASE("round trips preserve every field") {
  const EventStream three{640, 480, {{1, 0, 0, 0}, {1, 639, 479, 3}, {2'000'000, 17, 3, 2}}};
  CHECK(decode_evt64(encode_evt64(three)) == three);
  CHECK(decode_csv(encode_csv(three)) == three);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const EventStream s = random_stream(rng, 1 + rng() % 300, 1 + rng() % 2048, 1 + rng() % 2048);
    CHECK(decode_evt64(encode_evt64(s)) == s);
    CHECK(decode_csv(encode_csv(s)) == s);
  }
}

TEST_CASE("file round trip and unwritable path") {
  const auto dir = std::filesystem::temp_directory_path() / "evfilt_test_events";
  std::filesystem::create_directories(dir);
  const EventStream s{64, 48, {{10, 1, 2, 3}, {20, 63, 47, 0}}};
  for (EventFormat f : {EventFormat::evt64, EventFormat::csv}) {
    const auto path = dir / (f == EventFormat::csv ? "s.csv" : "s.evt");
    write_events(s, path, f);
    CHECK(read_events(path, f) == s);
  }
  CHECK_THROWS_AS(write_events(s, dir / "missing_dir" / "x.evt", EventFormat::evt64), IoError);
  CHECK_THROWS_AS(read_events(dir / "nope.evt", EventFormat::evt64), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("format selection") {
  CHECK(format_from_path("a/b.csv") == EventFormat::csv);
  CHECK(format_from_path("a/b.evt") == EventFormat::evt64);
  CHECK(parse_event_format("csv") == EventFormat::csv);
  CHECK_THROWS_AS(parse_event_format("aedat"), ConfigError);
}

TEST_CASE("merge orders by time with clean records first on ties") {
  const EventStream clean{8, 8, {{10, 1, 1, 0}}};
  const EventStream noise{8, 8, {{5, 2, 2, 2}}};
  const EventStream m = merge_streams(clean, noise);
  REQUIRE(m.size() == 2);
  CHECK(m.events[0].t == 5);
  CHECK(m.events[0].is_noise());
  CHECK(m.events[1].t == 10);

  const EventStream tie = merge_streams(clean, EventStream{8, 8, {{10, 3, 3, 3}}});
  CHECK_FALSE(tie.events[0].is_noise());
  CHECK(tie.events[1].is_noise());

  CHECK(merge_streams(clean, EventStream{8, 8, {}}) == clean);
  CHECK_THROWS_AS(merge_streams(clean, EventStream{9, 8, {}}), StreamError);
}

TEST_CASE("relabel maps 0 to 2 and 1 to 3") {
  const EventStream s{8, 8, {{1, 1, 1, 0}, {2, 2, 2, 1}}};
  const EventStream r = relabel_noise(s);
  CHECK(r.events[0] == Event{1, 1, 1, 2});
  CHECK(r.events[1] == Event{2, 2, 2, 3});
  CHECK_THROWS_AS(relabel_noise(EventStream{8, 8, {{1, 1, 1, 2}}}), StreamError);
}
