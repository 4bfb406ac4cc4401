#include "evfilt/events.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string_view>

namespace evfilt {

namespace {

constexpr char kMagic[4] = {'D', 'I', 'F', '1'};
constexpr std::size_t kHeaderBytes = 4 + 2 + 2 + 8;
constexpr std::uint64_t kCoordMask = (1u << 14) - 1;

template <typename T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
  }
}

template <typename T>
T get_le(const char* data) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[i])) << (8 * i);
  }
  return static_cast<T>(v);
}

std::string record_msg(std::size_t index, const std::string& what) {
  return "record " + std::to_string(index) + ": " + what;
}

template <typename T>
bool parse_field(std::string_view field, T& out) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
    field.remove_suffix(1);
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

FormatError::FormatError(Kind kind, std::optional<std::size_t> record, const std::string& what)
    : std::runtime_error(what), kind_(kind), record_(record) {}

EventFormat parse_event_format(const std::string& name) {
  if (name == "evt64") return EventFormat::evt64;
  if (name == "csv") return EventFormat::csv;
  throw ConfigError("unknown event format '" + name + "' (expected evt64|csv)");
}

EventFormat format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? EventFormat::csv : EventFormat::evt64;
}

void validate(const EventStream& stream) {
  using Kind = FormatError::Kind;
  if (stream.width == 0 || stream.height == 0) {
    throw FormatError(Kind::bad_header, std::nullopt, "stream geometry must be non-zero");
  }
  std::int64_t last = 0;
  for (std::size_t i = 0; i < stream.events.size(); ++i) {
    const Event& e = stream.events[i];
    if (e.x >= stream.width || e.y >= stream.height) {
      throw FormatError(Kind::out_of_range, i,
                        record_msg(i, "coordinate (" + std::to_string(e.x) + "," +
                                          std::to_string(e.y) + ") outside " +
                                          std::to_string(stream.width) + "x" +
                                          std::to_string(stream.height)));
    }
    if (e.p > 3) throw FormatError(Kind::bad_polarity, i, record_msg(i, "polarity above 3"));
    if (e.t < 0) throw FormatError(Kind::unsorted, i, record_msg(i, "negative timestamp"));
    if (e.t < last) throw FormatError(Kind::unsorted, i, record_msg(i, "timestamp decreases"));
    last = e.t;
  }
}

std::string encode_evt64(const EventStream& stream) {
  std::string out;
  out.reserve(kHeaderBytes + 8 * stream.events.size());
  out.append(kMagic, 4);
  put_le<std::uint16_t>(out, stream.width);
  put_le<std::uint16_t>(out, stream.height);
  put_le<std::uint64_t>(out, stream.events.size());
  for (std::size_t i = 0; i < stream.events.size(); ++i) {
    const Event& e = stream.events[i];
    if (e.t < 0 || e.t > 0xffffffffLL) {
      throw StreamError(record_msg(i, "timestamp does not fit the 32-bit EVT64 field"));
    }
    if (e.x > kCoordMask || e.y > kCoordMask || e.p > 3) {
      throw StreamError(record_msg(i, "field does not fit the EVT64 record"));
    }
    const std::uint64_t word = static_cast<std::uint64_t>(e.t) |
                               (static_cast<std::uint64_t>(e.x) << 32) |
                               (static_cast<std::uint64_t>(e.y) << 46) |
                               (static_cast<std::uint64_t>(e.p) << 60);
    put_le<std::uint64_t>(out, word);
  }
  return out;
}

EventStream decode_evt64(const std::string& bytes) {
  using Kind = FormatError::Kind;
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError(Kind::bad_header, std::nullopt, "missing DIF1 header");
  }
  EventStream s;
  s.width = get_le<std::uint16_t>(bytes.data() + 4);
  s.height = get_le<std::uint16_t>(bytes.data() + 6);
  const auto count = get_le<std::uint64_t>(bytes.data() + 8);
  if (s.width == 0 || s.height == 0) {
    throw FormatError(Kind::bad_header, std::nullopt, "zero width or height in header");
  }
  const std::size_t payload = bytes.size() - kHeaderBytes;
  if (count > payload / 8 || payload != count * 8) {
    throw FormatError(Kind::truncated, std::min<std::uint64_t>(count, payload / 8),
                      "payload holds " + std::to_string(payload) + " bytes, header declares " +
                          std::to_string(count) + " records");
  }
  s.events.resize(count);
  const char* base = bytes.data() + kHeaderBytes;
  for (std::size_t i = 0; i < count; ++i) {
    const auto word = get_le<std::uint64_t>(base + 8 * i);
    if ((word >> 62) != 0) {
      throw FormatError(Kind::bad_record, i, record_msg(i, "reserved bits set"));
    }
    Event& e = s.events[i];
    e.t = static_cast<std::int64_t>(word & 0xffffffffULL);
    e.x = static_cast<std::uint16_t>((word >> 32) & kCoordMask);
    e.y = static_cast<std::uint16_t>((word >> 46) & kCoordMask);
    e.p = static_cast<std::uint8_t>((word >> 60) & 0x3);
  }
  validate(s);
  return s;
}

std::string encode_csv(const EventStream& stream) {
  std::string out = "# width=" + std::to_string(stream.width) +
                    ",height=" + std::to_string(stream.height) + "\nt,x,y,p\n";
  out.reserve(out.size() + 20 * stream.events.size());
  for (const Event& e : stream.events) {
    out += std::to_string(e.t);
    out += ',';
    out += std::to_string(e.x);
    out += ',';
    out += std::to_string(e.y);
    out += ',';
    out += std::to_string(e.p);
    out += '\n';
  }
  return out;
}

EventStream decode_csv(const std::string& text, std::optional<Geometry> geometry) {
  using Kind = FormatError::Kind;
  EventStream s;
  std::string_view rest(text);
  bool saw_header = false;
  std::size_t index = 0;

  auto next_line = [&rest]() {
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  };

  while (!rest.empty()) {
    std::string_view line = next_line();
    if (line.empty()) continue;
    if (line.front() == '#') {
      unsigned w = 0, h = 0;
      if (std::sscanf(std::string(line).c_str(), "# width=%u,height=%u", &w, &h) == 2) {
        if (w == 0 || h == 0 || w > 0xffff || h > 0xffff) {
          throw FormatError(Kind::bad_header, std::nullopt, "invalid geometry comment");
        }
        geometry = Geometry{static_cast<std::uint16_t>(w), static_cast<std::uint16_t>(h)};
      }
      continue;
    }
    if (!saw_header) {
      if (line != "t,x,y,p") {
        throw FormatError(Kind::bad_header, std::nullopt, "expected CSV header 't,x,y,p'");
      }
      saw_header = true;
      continue;
    }
    std::string_view fields[4];
    std::size_t nf = 0;
    while (nf < 4) {
      const auto comma = line.find(',');
      fields[nf++] = line.substr(0, comma);
      if (comma == std::string_view::npos) {
        line = {};
        break;
      }
      line = line.substr(comma + 1);
    }
    std::int64_t t = 0;
    unsigned x = 0, y = 0, p = 0;
    if (nf != 4 || !line.empty() || !parse_field(fields[0], t) || !parse_field(fields[1], x) ||
        !parse_field(fields[2], y) || !parse_field(fields[3], p) || x > 0xffff || y > 0xffff ||
        p > 0xff) {
      throw FormatError(Kind::bad_record, index, record_msg(index, "malformed CSV line"));
    }
    s.events.push_back(Event{t, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                             static_cast<std::uint8_t>(p)});
    ++index;
  }
  if (!saw_header) throw FormatError(Kind::bad_header, std::nullopt, "missing CSV header");
  if (!geometry) {
    throw FormatError(Kind::bad_header, std::nullopt,
                      "CSV has no geometry comment and none was supplied");
  }
  s.width = geometry->width;
  s.height = geometry->height;
  validate(s);
  return s;
}

EventStream read_events(const std::filesystem::path& path, EventFormat format,
                        std::optional<Geometry> geometry) {
  const std::string data = slurp(path);
  return format == EventFormat::evt64 ? decode_evt64(data) : decode_csv(data, geometry);
}

void write_events(const EventStream& stream, const std::filesystem::path& path,
                  EventFormat format) {
  validate(stream);
  const std::string data =
      format == EventFormat::evt64 ? encode_evt64(stream) : encode_csv(stream);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

EventStream merge_streams(const EventStream& clean, const EventStream& noise) {
  if (clean.width != noise.width || clean.height != noise.height) {
    throw StreamError("cannot merge streams with different geometry");
  }
  EventStream out{clean.width, clean.height, {}};
  out.events.reserve(clean.size() + noise.size());
  // std::merge takes from the first range on ties.
  std::merge(clean.events.begin(), clean.events.end(), noise.events.begin(), noise.events.end(),
             std::back_inserter(out.events),
             [](const Event& a, const Event& b) { return a.t < b.t; });
  return out;
}

EventStream relabel_noise(const EventStream& stream) {
  EventStream out = stream;
  for (std::size_t i = 0; i < out.events.size(); ++i) {
    Event& e = out.events[i];
    if (e.p > 1) throw StreamError(record_msg(i, "already carries a noise label"));
    e.p = static_cast<std::uint8_t>(e.p + 2);
  }
  return out;
}

}  // namespace evfilt
