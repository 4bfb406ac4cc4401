#include "evfilt/scored.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

namespace evfilt {

std::string encode_scores_csv(const std::vector<ScoredEvent>& scored) {
  std::string out = "t,x,y,p,score,decision\n";
  out.reserve(out.size() + 40 * scored.size());
  char buf[64];
  for (const ScoredEvent& s : scored) {
    out += std::to_string(s.event.t);
    out += ',';
    out += std::to_string(s.event.x);
    out += ',';
    out += std::to_string(s.event.y);
    out += ',';
    out += std::to_string(s.event.p);
    out += ',';
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), s.score);
    out.append(buf, end);
    out += s.pass ? ",1\n" : ",0\n";
  }
  return out;
}

std::vector<ScoredEvent> decode_scores_csv(const std::string& text) {
  using Kind = FormatError::Kind;
  std::vector<ScoredEvent> out;
  std::string_view rest(text);
  bool header = false;
  std::size_t index = 0;
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "t,x,y,p,score,decision") {
        throw FormatError(Kind::bad_header, std::nullopt,
                          "expected header 't,x,y,p,score,decision'");
      }
      header = true;
      continue;
    }
    std::string_view f[6];
    std::size_t n = 0;
    for (; n < 6; ++n) {
      const auto comma = line.find(',');
      f[n] = line.substr(0, comma);
      if (comma == std::string_view::npos) {
        line = {};
        ++n;
        break;
      }
      line = line.substr(comma + 1);
    }
    ScoredEvent s;
    unsigned x = 0, y = 0, p = 0, d = 0;
    auto parse = [](std::string_view v, auto& out_value) {
      auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out_value);
      return ec == std::errc() && ptr == v.data() + v.size();
    };
    if (n != 6 || !line.empty() || !parse(f[0], s.event.t) || !parse(f[1], x) ||
        !parse(f[2], y) || !parse(f[3], p) || !parse(f[4], s.score) || !parse(f[5], d) ||
        x > 0xffff || y > 0xffff || p > 3 || d > 1) {
      throw FormatError(Kind::bad_record, index,
                        "record " + std::to_string(index) + ": malformed scores line");
    }
    s.event.x = static_cast<std::uint16_t>(x);
    s.event.y = static_cast<std::uint16_t>(y);
    s.event.p = static_cast<std::uint8_t>(p);
    s.pass = d == 1;
    out.push_back(s);
    ++index;
  }
  if (!header) throw FormatError(Kind::bad_header, std::nullopt, "missing scores header");
  return out;
}

void write_scores(const std::vector<ScoredEvent>& scored, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::string data = encode_scores_csv(scored);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<ScoredEvent> read_scores(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_scores_csv(ss.str());
}

}  // namespace evfilt
