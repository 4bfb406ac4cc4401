#pragma once

// Bit-accurate integer model of the FPGA DIF datapath.

#include <array>
#include <cstdint>
#include <vector>

#include "evfilt/area_layout.hpp"
#include "evfilt/dif_core.hpp"

namespace evfilt {

using i128 = __int128;

struct HwParams {
  int trunc_bits = 8;       // bits dropped from each K = I*d product
  int k_sat_bits = 12;      // K saturates at 2^k_sat_bits - 1
  int dt_bits = 24;         // timestamp differences wrap to this width
  int dist_frac_bits = 2;   // distance LUT precision, 0.25 px
  int ts_bits = 32;         // stored area timestamp width
  int iv_bits = 24;         // stored area interval width, saturating

  std::uint32_t k_max() const { return (std::uint32_t{1} << k_sat_bits) - 1; }
  std::uint32_t iv_max() const { return (std::uint32_t{1} << iv_bits) - 1; }
  /// Throws ConfigError.
  void validate() const;
};

/// sqrt(dx^2 + dy^2) rounded to nearest in units of 2^-frac_bits pixels.
std::uint32_t quantize_distance(double dx, double dy, int frac_bits);

/// Quantized centre distances for every in-area offset and neighbour slot.
class DistanceLut {
 public:
  DistanceLut(int scale, int frac_bits);

  const std::array<std::uint32_t, 4>& at(int off_x, int off_y) const {
    return table_[static_cast<std::size_t>(off_y) * scale_ + off_x];
  }
  int scale() const { return scale_; }
  int frac_bits() const { return frac_bits_; }

 private:
  int scale_;
  int frac_bits_;
  std::vector<std::array<std::uint32_t, 4>> table_;
};

/// K = clamp((I * d_q) >> trunc_bits, 1, 2^sat_bits - 1). sat_bits up to 62
/// is accepted so callers can model an unsaturated datapath.
std::uint64_t hw_k(std::uint64_t interval, std::uint32_t dist_q, int trunc_bits, int sat_bits);
inline std::uint64_t hw_k(std::uint64_t interval, std::uint32_t dist_q, const HwParams& p) {
  return hw_k(interval, dist_q, p.trunc_bits, p.k_sat_bits);
}

/// Two's-complement truncation of a difference to `bits` bits.
std::int64_t wrap_signed(std::int64_t value, int bits);

struct HwTrace {
  std::array<std::uint64_t, 4> k{};
  std::uint64_t kd1 = 0, kd2 = 0;  // K12*K21, K11*K22
  std::array<i128, 4> d{};
  i128 d_sum = 0;
  i128 f_c = 0;
  i128 dt_c = 0;
  bool pass = false;
  int multiplications = 0;

  /// dt_c / d_sum; exact thresholding is f_c > dt_c.
  double score() const { return static_cast<double>(dt_c) / static_cast<double>(d_sum); }
};

/// Division-free decision with the factored D products:
/// Kd1 = K12 K21, Kd2 = K11 K22, D11 = Kd1 K22, D12 = Kd2 K21, D21 = Kd2 K12, D22 = Kd1 K11.
HwTrace hw_decide(const std::array<std::int64_t, 4>& dt, const std::array<std::uint64_t, 4>& k,
                  std::int64_t filter_len);

struct HwAreaState {
  std::uint32_t ts = 0;
  std::uint32_t iv = 0;
  friend bool operator==(const HwAreaState&, const HwAreaState&) = default;
};

/// Shift-based IIR: ts += (Ts_e - ts) >> o, iv += ((Ts_e - ts) - iv) >> o with
/// floor shifts; ts wraps at ts_bits, iv saturates to [0, 2^iv_bits - 1].
HwAreaState hw_update_area(HwAreaState s, std::int64_t event_t, int update_shift, const HwParams& p);

struct HwGrid {
  AreaLayout layout;
  std::vector<HwAreaState> state;
  std::vector<std::uint8_t> active;

  HwGrid() = default;
  HwGrid(std::uint16_t width, std::uint16_t height, const FilterConfig& cfg, const HwParams& p);
};

/// Pseudo-event update of inactive areas, then clear all activity flags.
void hw_global_update(HwGrid& grid, std::int64_t now, int update_shift, const HwParams& p);

/// Everything the datapath computes for one event given the four area reads.
struct HwEvaluation {
  HwTrace trace;
  std::array<std::int64_t, 4> dt{};
  HwAreaState own_next;  // new state for the event's own area
};

/// Stateless core shared by the sequential model and the pipeline simulator.
class HwDatapath {
 public:
  HwDatapath(const FilterConfig& cfg, const HwParams& p);

  HwEvaluation evaluate(const Event& e, const NeighborSlots& slots,
                        const std::array<HwAreaState, 4>& reads) const;

  const FilterConfig& config() const { return cfg_; }
  const HwParams& params() const { return params_; }
  const DistanceLut& lut() const { return lut_; }

 private:
  FilterConfig cfg_;
  HwParams params_;
  DistanceLut lut_;
};

/// Sequential integer filter. The emitted score is the model-only quotient
/// dt_c / d_sum; the datapath itself only produces the pass bit.
class HwFilter {
 public:
  HwFilter(std::uint16_t width, std::uint16_t height, const FilterConfig& cfg, const HwParams& p);

  ScoredEvent process(const Event& e, HwTrace* trace = nullptr);

  const HwGrid& grid() const { return grid_; }
  std::uint64_t global_updates() const { return global_updates_; }

 private:
  HwDatapath path_;
  HwGrid grid_;
  GlobalUpdateClock clock_;
  std::int64_t last_t_ = 0;
  std::uint64_t global_updates_ = 0;
};

std::vector<ScoredEvent> hw_filter_stream(const EventStream& stream, const FilterConfig& cfg,
                                          const HwParams& p);

}  // namespace evfilt
