#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <optional>

namespace evfilt {

/// Which four subareas an event interpolates over and how far it sits from
/// each of their centres. Distances are kept in half-pixel units so they stay
/// integral: centres lie at offset (scale - 1) / 2 inside an area.
struct NeighborSlots {
  std::array<std::uint32_t, 4> area{};  // indexed by Slot; clamped at borders
  std::uint32_t own_slot = 0;           // slot holding the event's own area
  std::uint32_t own_area = 0;
  std::uint16_t off_x = 0, off_y = 0;   // pixel offset inside the own area
  int dx1_h = 0, dx2_h = 0;             // 2 * distance to left / right column centre
  int dy1_h = 0, dy2_h = 0;             // 2 * distance to upper / lower row centre
};

class AreaLayout {
 public:
  AreaLayout() = default;
  AreaLayout(std::uint16_t width, std::uint16_t height, int scale)
      : width_(width),
        height_(height),
        scale_(scale),
        shift_(std::countr_zero(static_cast<unsigned>(scale))),
        cols_((width + scale - 1) / scale),
        rows_((height + scale - 1) / scale) {}

  std::uint16_t width() const { return width_; }
  std::uint16_t height() const { return height_; }
  int scale() const { return scale_; }
  std::uint32_t cols() const { return cols_; }
  std::uint32_t rows() const { return rows_; }
  std::uint32_t areas() const { return cols_ * rows_; }

  std::uint32_t area_of(std::uint16_t x, std::uint16_t y) const {
    return (static_cast<std::uint32_t>(y) >> shift_) * cols_ + (static_cast<std::uint32_t>(x) >> shift_);
  }

  NeighborSlots neighbors(std::uint16_t x, std::uint16_t y) const {
    NeighborSlots n;
    const auto col = static_cast<std::int64_t>(x >> shift_);
    const auto row = static_cast<std::int64_t>(y >> shift_);
    n.off_x = static_cast<std::uint16_t>(x & (scale_ - 1));
    n.off_y = static_cast<std::uint16_t>(y & (scale_ - 1));

    const int own_dx = std::abs(2 * n.off_x - (scale_ - 1));
    const int own_dy = std::abs(2 * n.off_y - (scale_ - 1));
    const bool left_half = 2 * n.off_x < scale_ - 1;
    const bool upper_half = 2 * n.off_y < scale_ - 1;

    std::int64_t c1 = left_half ? col - 1 : col, c2 = left_half ? col : col + 1;
    std::int64_t r1 = upper_half ? row - 1 : row, r2 = upper_half ? row : row + 1;
    n.dx1_h = left_half ? 2 * scale_ - own_dx : own_dx;
    n.dx2_h = left_half ? own_dx : 2 * scale_ - own_dx;
    n.dy1_h = upper_half ? 2 * scale_ - own_dy : own_dy;
    n.dy2_h = upper_half ? own_dy : 2 * scale_ - own_dy;

    // Clamping duplicates border areas into the missing slots.
    const auto clamp_col = [this](std::int64_t c) {
      return static_cast<std::uint32_t>(std::clamp<std::int64_t>(c, 0, cols_ - 1));
    };
    const auto clamp_row = [this](std::int64_t r) {
      return static_cast<std::uint32_t>(std::clamp<std::int64_t>(r, 0, rows_ - 1));
    };
    const std::uint32_t a1 = clamp_col(c1), a2 = clamp_col(c2);
    const std::uint32_t b1 = clamp_row(r1), b2 = clamp_row(r2);
    n.area = {b1 * cols_ + a1, b1 * cols_ + a2, b2 * cols_ + a1, b2 * cols_ + a2};
    n.own_slot = (upper_half ? 2u : 0u) + (left_half ? 1u : 0u);
    n.own_area = static_cast<std::uint32_t>(row) * cols_ + static_cast<std::uint32_t>(col);
    return n;
  }

 private:
  std::uint16_t width_ = 0, height_ = 0;
  int scale_ = 16;
  int shift_ = 4;
  std::uint32_t cols_ = 0, rows_ = 0;
};

/// Fires once whenever event time reaches the next multiple of the period.
/// Several skipped boundaries collapse into one firing at the latest one.
class GlobalUpdateClock {
 public:
  explicit GlobalUpdateClock(std::int64_t period_us) : period_(period_us), next_(period_us) {}

  std::optional<std::int64_t> crossed(std::int64_t t) {
    if (period_ <= 0 || t < next_) return std::nullopt;
    const std::int64_t boundary = (t / period_) * period_;
    next_ = boundary + period_;
    return boundary;
  }

 private:
  std::int64_t period_;
  std::int64_t next_;
};

}  // namespace evfilt
