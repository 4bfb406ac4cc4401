#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace evfilt {

/// One sensor record. Polarity 0/1 is a genuine event, 2/3 is labeled noise.
struct Event {
  std::int64_t t = 0;  // microseconds
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  std::uint8_t p = 0;

  bool is_noise() const { return p >= 2; }
  friend bool operator==(const Event&, const Event&) = default;
};

struct EventStream {
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::vector<Event> events;

  std::size_t size() const { return events.size(); }
  bool empty() const { return events.empty(); }
  friend bool operator==(const EventStream&, const EventStream&) = default;
};

enum class EventFormat { evt64, csv };

EventFormat parse_event_format(const std::string& name);
/// Picks csv for ".csv" extensions and evt64 otherwise.
EventFormat format_from_path(const std::filesystem::path& path);

/// Thrown when a file does not decode into a valid stream. `record()` names the
/// first offending event (zero based) when the failure is tied to one.
class FormatError : public std::runtime_error {
 public:
  enum class Kind { bad_header, truncated, bad_record, out_of_range, unsorted, bad_polarity };

  FormatError(Kind kind, std::optional<std::size_t> record, const std::string& what);

  Kind kind() const { return kind_; }
  std::optional<std::size_t> record() const { return record_; }

 private:
  Kind kind_;
  std::optional<std::size_t> record_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation's precondition on stream contents or geometry fails.
class StreamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for invalid filter, generator or CLI configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Geometry {
  std::uint16_t width = 0;
  std::uint16_t height = 0;
};

/// Checks geometry, coordinate range, polarity range and timestamp order.
/// Throws FormatError naming the first bad record.
void validate(const EventStream& stream);

/// CSV files carry geometry in a leading "# width=W,height=H" line. When that
/// line is absent the caller must supply `geometry`.
EventStream read_events(const std::filesystem::path& path, EventFormat format,
                        std::optional<Geometry> geometry = std::nullopt);
void write_events(const EventStream& stream, const std::filesystem::path& path, EventFormat format);

/// In-memory codecs behind read_events/write_events.
std::string encode_evt64(const EventStream& stream);
EventStream decode_evt64(const std::string& bytes);
std::string encode_csv(const EventStream& stream);
EventStream decode_csv(const std::string& text, std::optional<Geometry> geometry = std::nullopt);

/// Stable merge by timestamp; on equal timestamps clean records come first.
EventStream merge_streams(const EventStream& clean, const EventStream& noise);

/// Maps polarity 0 -> 2 and 1 -> 3. Throws StreamError if any record is already labeled.
EventStream relabel_noise(const EventStream& stream);

}  // namespace evfilt
