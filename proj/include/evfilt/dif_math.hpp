#pragma once

// Interpolation scores and their division-free decision forms, written over a
// generic number type. The filters instantiate them with double; the tests
// instantiate them with exact rationals to check that both forms agree.

#include <array>
#include <cstddef>

namespace evfilt {

/// Neighbour slots: first digit is the row (1 = upper), second the column (1 = left).
enum Slot : std::size_t { s11 = 0, s12 = 1, s21 = 2, s22 = 3 };

template <class Num>
using Quad = std::array<Num, 4>;

enum class Algo { dif, bif };

template <class Num>
struct DecisionTraceT {
  Algo algo = Algo::dif;
  // DIF: K = I*d (the reciprocal of the frequency-distance weight), D products.
  Quad<Num> k{};
  Quad<Num> d{};
  Num d_sum{};
  // BIF: horizontal weights and the vertical combination terms.
  Quad<Num> b{};
  Num s_top{}, s_bot{}, b_top{}, b_bot{}, s_all{};
  Num f_c{};
  Num dt_c{};
  bool pass = false;
};

/// Ts - T with T the frequency- and distance-weighted mean of neighbour
/// timestamps. Inputs are the per-slot differences Ts - T_ij, intervals and
/// Euclidean distances to the area centres.
template <class Num>
Num dif_score(const Quad<Num>& dt, const Quad<Num>& iv, const Quad<Num>& dist) {
  Num num{0}, den{0};
  for (std::size_t i = 0; i < 4; ++i) {
    const Num c = Num{1} / (iv[i] * dist[i]);
    num += dt[i] * c;
    den += c;
  }
  return num / den;
}

/// Row-wise interpolation weighted by interval and horizontal distance, then a
/// vertical pass weighted by the opposite row's interval product.
template <class Num>
Num bif_score(const Quad<Num>& dt, const Quad<Num>& iv, const Num& dx1, const Num& dx2,
              const Num& dy1, const Num& dy2) {
  const Num w11 = iv[s12] * dx2, w12 = iv[s11] * dx1;
  const Num w21 = iv[s22] * dx2, w22 = iv[s21] * dx1;
  const Num top = (dt[s11] * w11 + dt[s12] * w12) / (w11 + w12);
  const Num bot = (dt[s21] * w21 + dt[s22] * w22) / (w21 + w22);
  const Num wt = iv[s21] * iv[s22] * dy2;
  const Num wb = iv[s11] * iv[s12] * dy1;
  return (top * wt + bot * wb) / (wt + wb);
}

/// Pass iff F_L * D_sum > sum(dT_ij * D_ij), where D_ij is the product of the
/// other three I*d factors. Equivalent to dif_score < F_L for positive weights.
template <class Num>
DecisionTraceT<Num> dif_decide_division_free(const Quad<Num>& dt, const Quad<Num>& iv,
                                             const Quad<Num>& dist, const Num& filter_len) {
  DecisionTraceT<Num> tr;
  tr.algo = Algo::dif;
  for (std::size_t i = 0; i < 4; ++i) tr.k[i] = iv[i] * dist[i];
  tr.d[s11] = tr.k[s12] * tr.k[s21] * tr.k[s22];
  tr.d[s12] = tr.k[s11] * tr.k[s21] * tr.k[s22];
  tr.d[s21] = tr.k[s11] * tr.k[s12] * tr.k[s22];
  tr.d[s22] = tr.k[s11] * tr.k[s12] * tr.k[s21];
  tr.d_sum = (tr.d[s11] + tr.d[s12]) + (tr.d[s21] + tr.d[s22]);
  tr.f_c = filter_len * tr.d_sum;
  tr.dt_c = (dt[s11] * tr.d[s11] + dt[s12] * tr.d[s12]) + (dt[s21] * tr.d[s21] + dt[s22] * tr.d[s22]);
  tr.pass = tr.f_c > tr.dt_c;
  return tr;
}

template <class Num>
DecisionTraceT<Num> bif_decide_division_free(const Quad<Num>& dt, const Quad<Num>& iv,
                                             const Num& dx1, const Num& dx2, const Num& dy1,
                                             const Num& dy2, const Num& filter_len) {
  DecisionTraceT<Num> tr;
  tr.algo = Algo::bif;
  tr.b[s11] = iv[s12] * dx2;
  tr.b[s12] = iv[s11] * dx1;
  tr.b[s21] = iv[s22] * dx2;
  tr.b[s22] = iv[s21] * dx1;
  tr.s_top = tr.b[s11] + tr.b[s12];
  tr.s_bot = tr.b[s21] + tr.b[s22];
  tr.b_top = iv[s21] * iv[s22] * dy2;
  tr.b_bot = iv[s11] * iv[s12] * dy1;
  tr.s_all = tr.b_top + tr.b_bot;
  tr.f_c = filter_len * tr.s_all * tr.s_top * tr.s_bot;
  tr.dt_c = (dt[s11] * tr.b[s11] + dt[s12] * tr.b[s12]) * tr.s_bot * tr.b_top +
            (dt[s21] * tr.b[s21] + dt[s22] * tr.b[s22]) * tr.s_top * tr.b_bot;
  tr.pass = tr.f_c > tr.dt_c;
  return tr;
}

}  // namespace evfilt
