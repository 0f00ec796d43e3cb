#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "mapgeo/catalog.hpp"
#include "mapgeo/conditions.hpp"
#include "mapgeo/errors.hpp"
#include "mapgeo/geometry.hpp"
#include "mapgeo/maps.hpp"

using namespace mapgeo;

namespace {

TensorValue up_vector(const std::vector<double>& comps) {
  const int m = static_cast<int>(comps.size());
  TensorValue v({m}, {Variance::Up});
  for (int a = 0; a < m; ++a) v({a}) = comps[static_cast<std::size_t>(a)];
  return v;
}

TensorValue sym2(const std::vector<std::vector<double>>& rows) {
  const int m = static_cast<int>(rows.size());
  TensorValue t({m, m}, {Variance::Down, Variance::Down});
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      t({a, b}) = rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  return t;
}

TensorValue diag_metric(const std::vector<double>& d) {
  const int m = static_cast<int>(d.size());
  TensorValue t({m, m}, {Variance::Down, Variance::Down});
  for (int a = 0; a < m; ++a) t({a, a}) = d[static_cast<std::size_t>(a)];
  return t;
}

TensorValue lower(const TensorValue& g, const TensorValue& v) {
  const int m = g.shape()[0];
  TensorValue out({m}, {Variance::Down});
  for (int a = 0; a < m; ++a) {
    double s = 0.0;
    for (int b = 0; b < m; ++b) s += g({a, b}) * v({b});
    out({a}) = s;
  }
  return out;
}

double pair_with(const TensorValue& g, const TensorValue& a,
                 const TensorValue& b) {
  const int m = g.shape()[0];
  double s = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) s += g({i, j}) * a({i}) * b({j});
  return s;
}

VectorField constant_field(const Chart& chart, const std::vector<double>& c) {
  auto vars = make_vars(chart.names);
  std::vector<Expression> comps;
  comps.reserve(c.size());
  for (double x : c) comps.push_back(Expression::constant(x, vars));
  return VectorField{chart, std::move(comps)};
}

/// Gram-matrix Lorentzian metric g = B^T eta B with |det B| bounded away
/// from zero, plus the observer that B maps to the eta-time axis.  Any
/// eta-unit-timelike w pulls back to a g-unit observer B^{-1} w.
struct FuzzGeometry {
  Eigen::MatrixXd B;
  TensorValue g;
  TensorValue v;  // unit timelike: g(v,v) = 1 up to solver rounding

  TensorValue observer(const Eigen::VectorXd& eta_frame_dir) const {
    const int m = static_cast<int>(B.rows());
    Eigen::VectorXd w = B.colPivHouseholderQr().solve(eta_frame_dir);
    TensorValue out({m}, {Variance::Up});
    for (int a = 0; a < m; ++a) out({a}) = w(a);
    return out;
  }
};

FuzzGeometry random_geometry(int m, std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd B(m, m);
  do {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) B(a, b) = uni(rng);
  } while (std::abs(B.determinant()) < 0.5);

  Eigen::VectorXd eta = Eigen::VectorXd::Constant(m, -1.0);
  eta(0) = 1.0;
  Eigen::MatrixXd gmat = B.transpose() * eta.asDiagonal() * B;

  FuzzGeometry out{B, TensorValue({m, m}, {Variance::Down, Variance::Down}),
                   TensorValue({m}, {Variance::Up})};
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) out.g({a, b}) = gmat(a, b);
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(m);
  e0(0) = 1.0;
  out.v = out.observer(e0);
  return out;
}

/// Random pullback f = dphi^T h dphi with h symmetric positive definite,
/// so f is positive semidefinite of rank at most n.
TensorValue random_pullback(int m, int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd D(n, m), A(n, n);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a) D(i, a) = uni(rng);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = uni(rng);
  Eigen::MatrixXd h = A.transpose() * A + 0.1 * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd f = D.transpose() * h * D;
  TensorValue out({m, m}, {Variance::Down, Variance::Down});
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) out({a, b}) = f(a, b);
  return out;
}

}  // namespace

TEST_CASE("observer and null frames validate their normalizations") {
  TensorValue g = diag_metric({1.0, -1.0});

  CHECK_NOTHROW(make_observer_frame(g, up_vector({1.0, 0.0})));
  CHECK_THROWS_AS(make_observer_frame(g, up_vector({2.0, 0.0})), FrameNotUnit);
  CHECK_THROWS_AS(make_observer_frame(g, up_vector({1.0, 1.0})), FrameNotUnit);
  CHECK_THROWS_AS(make_observer_frame(g, up_vector({0.0, 1.0})), FrameNotUnit);
  CHECK_THROWS_AS(make_observer_frame(g, up_vector({1.0, 0.0, 0.0})),
                  ShapeMismatch);

  const double r = 1.0 / std::sqrt(2.0);
  TensorValue l = up_vector({r, r});
  TensorValue n = up_vector({r, -r});
  CHECK_NOTHROW(make_null_frame(g, l, n));
  // g(l, l) = 0 but g(l, l') = 0 != 1 for l' = l.
  CHECK_THROWS_AS(make_null_frame(g, l, l), FrameNotNull);
  // First direction timelike, not lightlike.
  CHECK_THROWS_AS(make_null_frame(g, up_vector({1.0, 0.0}), n), FrameNotNull);
}

TEST_CASE("null frames derived from observers keep the normalizations") {
  SUBCASE("boosted observer on the 2d flat metric") {
    TensorValue g = diag_metric({1.0, -1.0});
    const double a = 0.8;
    TensorValue v = up_vector({std::cosh(a), std::sinh(a)});
    NullFrame fr = null_frame_from_timelike(g, v);
    CHECK(std::abs(pair_with(g, fr.l, fr.l)) <= 1e-12);
    CHECK(std::abs(pair_with(g, fr.n, fr.n)) <= 1e-12);
    CHECK(std::abs(pair_with(g, fr.l, fr.n) - 1.0) <= 1e-12);
    // The construction lands on the lightlike rays e^{-a}(1,-1), e^{a}(1,1).
    CHECK(fr.l({0}) == doctest::Approx(std::exp(-a) / std::sqrt(2.0)));
    CHECK(fr.l({1}) == doctest::Approx(-std::exp(-a) / std::sqrt(2.0)));
    CHECK(fr.n({0}) == doctest::Approx(std::exp(a) / std::sqrt(2.0)));
    CHECK(fr.n({1}) == doctest::Approx(std::exp(a) / std::sqrt(2.0)));
  }

  SUBCASE("rest observer in 4d skips its own axis when projecting") {
    TensorValue g = diag_metric({1.0, -1.0, -1.0, -1.0});
    NullFrame fr = null_frame_from_timelike(g, up_vector({1, 0, 0, 0}));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(fr.l({0}) - r) <= 1e-15);
    CHECK(std::abs(fr.l({1}) - r) <= 1e-15);
    CHECK(std::abs(fr.n({0}) - r) <= 1e-15);
    CHECK(std::abs(fr.n({1}) + r) <= 1e-15);
    CHECK(fr.l({2}) == 0.0);
    CHECK(fr.l({3}) == 0.0);
  }

  SUBCASE("rejects non-unit input") {
    TensorValue g = diag_metric({1.0, -1.0});
    CHECK_THROWS_AS(null_frame_from_timelike(g, up_vector({0.0, 1.0})),
                    FrameNotUnit);
  }
}

TEST_CASE("observer-adapted metric flips the timelike direction") {
  TensorValue g = diag_metric({1.0, -1.0});

  SUBCASE("rest observer gives the euclidean metric") {
    ObserverFrame fr = make_observer_frame(g, up_vector({1.0, 0.0}));
    TensorValue shadow = shadow_metric(g, fr);
    CHECK(std::abs(shadow({0, 0}) - 1.0) <= 1e-15);
    CHECK(std::abs(shadow({1, 1}) - 1.0) <= 1e-15);
    CHECK(std::abs(shadow({0, 1})) <= 1e-15);
  }

  SUBCASE("boosted observer: closed form, unit determinant, inverse") {
    const double a = 1.0;
    const double c = std::cosh(a), s = std::sinh(a);
    ObserverFrame fr = make_observer_frame(g, up_vector({c, s}));
    TensorValue shadow = shadow_metric(g, fr);
    CHECK(shadow({0, 0}) == doctest::Approx(2 * c * c - 1));
    CHECK(shadow({1, 1}) == doctest::Approx(2 * s * s + 1));
    CHECK(shadow({0, 1}) == doctest::Approx(-2 * c * s));
    CHECK(shadow({0, 1}) == shadow({1, 0}));
    const double det = shadow({0, 0}) * shadow({1, 1}) -
                       shadow({0, 1}) * shadow({1, 0});
    CHECK(det == doctest::Approx(1.0));

    TensorValue inv = shadow_metric_inverse(g, fr);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s_ij = 0.0;
        for (int k = 0; k < 2; ++k) s_ij += shadow({i, k}) * inv({k, j});
        CHECK(std::abs(s_ij - (i == j ? 1.0 : 0.0)) <= 1e-12);
      }
  }

  SUBCASE("a spacelike direction smuggled past validation is caught") {
    ObserverFrame bogus{up_vector({0.0, 1.0})};
    CHECK_THROWS_AS(shadow_metric(g, bogus), FrameNotUnit);
  }
}

TEST_CASE("observer split of a worked 2d example") {
  TensorValue g = diag_metric({1.0, -1.0});
  TensorValue f = sym2({{1.0, 2.0}, {2.0, 4.0}});
  ObserverFrame fr = make_observer_frame(g, up_vector({1.0, 0.0}));

  EnergySplit split = energy_split(f, g, fr);
  CHECK(split.energy == doctest::Approx(-1.5));
  CHECK(split.density == doctest::Approx(2.5));
  CHECK(std::abs(split.e_plus - split.density) <= 1e-12);
  CHECK(split.momentum({0}) == doctest::Approx(2.5));
  CHECK(split.momentum({1}) == doctest::Approx(2.0));
  // Lorentzian norm of the momentum: 2.5^2 - 2^2.
  CHECK(split.momentum_norm2 == doctest::Approx(2.25));
  CHECK(std::abs(split.proper({0})) <= 1e-12);
  CHECK(split.proper({1}) == doctest::Approx(2.0));
  // The proper part is orthogonal to the observer.
  CHECK(std::abs(split.proper({0}) * fr.v({0}) +
                 split.proper({1}) * fr.v({1})) <= 1e-12);
  // energy^2 <= |I|^2 <= e_plus^2 (the lower bound is sharp here).
  CHECK(split.momentum_norm2 >= split.energy * split.energy - 1e-12);
  CHECK(split.e_plus * split.e_plus >= split.momentum_norm2 - 1e-12);

  SUBCASE("zero pullback gives the zero split") {
    EnergySplit z = energy_split(diag_metric({0.0, 0.0}), g, fr);
    CHECK(z.energy == 0.0);
    CHECK(z.density == 0.0);
    CHECK(z.e_plus == 0.0);
    CHECK(z.momentum_norm2 == 0.0);
    CHECK(z.momentum.max_abs() == 0.0);
  }

  SUBCASE("shape guards") {
    CHECK_THROWS_AS(energy_split(diag_metric({1.0, 1.0, 1.0}), g, fr),
                    ShapeMismatch);
  }
}

TEST_CASE("observer split on the plane-wave geometry") {
  CatalogEntry wave = coupled_plane_wave(1.0);
  const Point p = {0.3, 0.7, 0.5, -0.4};
  const TensorValue g = wave.metric.value(p);
  const TensorValue f = pullback_metric(*wave.map, *wave.target, p);
  const double H = g({1, 1});

  // w = ((1-H)/2, 1, 0, 0) is unit timelike: g(w,w) = 2*(1-H)/2 + H = 1.
  TensorValue w = up_vector({(1.0 - H) / 2.0, 1.0, 0.0, 0.0});
  ObserverFrame fr = make_observer_frame(g, w);
  EnergySplit split = energy_split(f, g, fr);

  CHECK(std::abs(split.energy) <= 1e-12);  // lightlike differential
  CHECK(split.density == doctest::Approx(1.0));
  CHECK(std::abs(split.e_plus - split.density) <= 1e-12);
  CHECK(std::abs(split.momentum({0})) <= 1e-12);
  CHECK(split.momentum({1}) == doctest::Approx(1.0));
  CHECK(std::abs(split.momentum_norm2) <= 1e-12);
  double jw = 0.0;
  for (int a = 0; a < 4; ++a) jw += split.proper({a}) * w({a});
  CHECK(std::abs(jw) <= 1e-12);
}

TEST_CASE("lightlike split on the plane-wave geometry") {
  CatalogEntry wave = coupled_plane_wave(1.0);
  const Point p = {0.3, 0.7, 0.5, -0.4};
  const TensorValue g = wave.metric.value(p);
  const TensorValue f = pullback_metric(*wave.map, *wave.target, p);
  const double H = g({1, 1});

  TensorValue l = up_vector({1.0, 0.0, 0.0, 0.0});
  TensorValue n = up_vector({-H / 2.0, 1.0, 0.0, 0.0});

  SUBCASE("along the parallel direction the stress is invisible") {
    NullFrame fr = make_null_frame(g, l, n);
    NullSplit split = null_energy_split(f, g, fr);
    CHECK(std::abs(split.t_ll) <= 1e-14);
    CHECK(std::abs(split.t_ln) <= 1e-14);
    CHECK(split.momentum.max_abs() <= 1e-14);
    CHECK(std::abs(split.momentum_norm2) <= 1e-14);
  }

  SUBCASE("the swapped frame sees a pure flux with lightlike momentum") {
    NullFrame fr = make_null_frame(g, n, l);
    NullSplit split = null_energy_split(f, g, fr);
    CHECK(split.t_ll == doctest::Approx(1.0));
    CHECK(std::abs(split.t_ln) <= 1e-12);
    CHECK(std::abs(split.momentum_norm2) <= 1e-12);
    // t_ln = 0 forces the momentum onto the partner direction:
    // I_a = t_ll * (second direction lowered).
    TensorValue nb = lower(g, fr.n);
    for (int a = 0; a < 4; ++a)
      CHECK(std::abs(split.momentum({a}) - split.t_ll * nb({a})) <= 1e-12);
    // Both bounds of 0 <= |I|^2 <= 2 t_ll t_ln collapse to equality.
    CHECK(std::abs(2.0 * split.t_ll * split.t_ln - split.momentum_norm2) <=
          1e-12);
  }
}

TEST_CASE("classical conditions on worked examples") {
  SUBCASE("2d stress with degenerate trace") {
    TensorValue g = diag_metric({1.0, -1.0});
    TensorValue stress = sym2({{2.5, 2.0}, {2.0, 2.5}});
    std::vector<ObserverFrame> frames = {
        make_observer_frame(g, up_vector({1.0, 0.0})),
        make_observer_frame(
            g, up_vector({std::cosh(0.6), std::sinh(0.6)}))};
    EnergyConditionReport rep =
        classical_energy_conditions(stress, g, frames);
    REQUIRE(rep.frames.size() == 2);
    CHECK(rep.trace_degenerate);
    CHECK(rep.frames[0].density == doctest::Approx(2.5));
    CHECK(rep.frames[0].momentum_norm2 == doctest::Approx(2.25));
    // At source dimension 2 the stress is trace-free, so the strong margin
    // reduces to -tr T = 0.
    CHECK(std::abs(rep.frames[0].strong_margin) <= 1e-12);
    CHECK(rep.dominant_all);
    CHECK(rep.strong_all);
    CHECK(rep.worst_density <= rep.frames[0].density);
    CHECK(rep.worst_density <= rep.frames[1].density);
  }

  SUBCASE("4d plane-wave stress against a crossing observer") {
    CatalogEntry wave = coupled_plane_wave(1.0);
    const Point p = {0.3, 0.7, 0.5, -0.4};
    const TensorValue g = wave.metric.value(p);
    const TensorValue stress =
        stress_energy(wave.metric, *wave.map, *wave.target, p);
    const double H = g({1, 1});
    std::vector<ObserverFrame> frames = {make_observer_frame(
        g, up_vector({(1.0 - H) / 2.0, 1.0, 0.0, 0.0}))};
    EnergyConditionReport rep =
        classical_energy_conditions(stress, g, frames);
    CHECK_FALSE(rep.trace_degenerate);
    CHECK(rep.frames[0].density == doctest::Approx(1.0));
    CHECK(std::abs(rep.frames[0].momentum_norm2) <= 1e-12);
    CHECK(rep.frames[0].strong_margin == doctest::Approx(2.0));
    CHECK(rep.dominant_all);
    CHECK(rep.strong_all);
  }

  SUBCASE("a stress violating the conditions is reported as such") {
    TensorValue g = diag_metric({1.0, -1.0, -1.0});
    // Negative density for the rest observer.
    TensorValue stress = diag_metric({-1.0, 0.0, 0.0});
    std::vector<ObserverFrame> frames = {
        make_observer_frame(g, up_vector({1.0, 0.0, 0.0}))};
    EnergyConditionReport rep =
        classical_energy_conditions(stress, g, frames);
    CHECK_FALSE(rep.dominant_all);
    CHECK(rep.worst_density == doctest::Approx(-1.0));
    // tr T = -1, margin = (3-2)(-1) - (-1) = 0: strong still holds.
    CHECK(rep.strong_all);
  }
}

TEST_CASE("observer split inequalities hold across random geometries") {
  std::mt19937 rng(20260816u);
  double worst_identity = 0.0;    // |T(v,v) - e_plus|
  double worst_orthogonality = 0.0;
  double worst_lower = 0.0;       // min (|I|^2 - e^2), sign-flipped
  double worst_upper = 0.0;       // min (e_plus^2 - |I|^2), sign-flipped
  double worst_line_gap = 0.0;    // the n = 1 case: | |I|^2 - e^2 |

  for (int trial = 0; trial < 10000; ++trial) {
    const int m = 2 + trial % 3;
    const int n = 1 + (trial / 3) % 3;
    FuzzGeometry geo = random_geometry(m, rng);
    TensorValue f = random_pullback(m, n, rng);
    ObserverFrame fr = make_observer_frame(geo.g, geo.v, 1e-8);

    EnergySplit split = energy_split(f, geo.g, fr);
    const double scale = std::max(1.0, split.e_plus * split.e_plus);

    worst_identity = std::max(
        worst_identity, std::abs(split.density - split.e_plus) / scale);

    double jv = 0.0;
    for (int a = 0; a < m; ++a) jv += split.proper({a}) * fr.v({a});
    worst_orthogonality = std::max(worst_orthogonality, std::abs(jv) / scale);

    const double lower_gap =
        (split.momentum_norm2 - split.energy * split.energy) / scale;
    const double upper_gap =
        (split.e_plus * split.e_plus - split.momentum_norm2) / scale;
    worst_lower = std::max(worst_lower, -lower_gap);
    worst_upper = std::max(worst_upper, -upper_gap);
    if (n == 1)
      worst_line_gap = std::max(worst_line_gap, std::abs(lower_gap));
  }

  CHECK(worst_identity <= 1e-9);
  CHECK(worst_orthogonality <= 1e-9);
  CHECK(worst_lower <= 1e-9);
  CHECK(worst_upper <= 1e-9);
  // Rank-one pullbacks make the lower bound an equality.
  CHECK(worst_line_gap <= 1e-9);
}

TEST_CASE("lightlike split inequalities hold across random geometries") {
  std::mt19937 rng(777702u);
  double worst_t_ll = 0.0;
  double worst_t_ln = 0.0;
  double worst_norm = 0.0;     // momentum norm below zero
  double worst_cross = 0.0;    // 2 t_ll t_ln - |I|^2 below zero
  double worst_plane = 0.0;    // m = 2: t_ln and the momentum direction law

  for (int trial = 0; trial < 10000; ++trial) {
    const int m = 2 + trial % 3;
    const int n = 1 + (trial / 3) % 3;
    FuzzGeometry geo = random_geometry(m, rng);
    TensorValue f = random_pullback(m, n, rng);
    NullFrame fr = null_frame_from_timelike(geo.g, geo.v, 1e-8);

    NullSplit split = null_energy_split(f, geo.g, fr);
    const double scale =
        std::max({1.0, std::abs(split.t_ll), std::abs(split.t_ln)});
    const double scale2 = scale * scale;

    worst_t_ll = std::max(worst_t_ll, -split.t_ll / scale);
    worst_t_ln = std::max(worst_t_ln, -split.t_ln / scale);
    worst_norm = std::max(worst_norm, -split.momentum_norm2 / scale2);
    worst_cross = std::max(
        worst_cross,
        -(2.0 * split.t_ll * split.t_ln - split.momentum_norm2) / scale2);

    if (m == 2) {
      worst_plane = std::max(worst_plane, std::abs(split.t_ln) / scale);
      TensorValue nb = lower(geo.g, fr.n);
      for (int a = 0; a < m; ++a)
        worst_plane = std::max(
            worst_plane,
            std::abs(split.momentum({a}) - split.t_ll * nb({a})) / scale);
    }
  }

  CHECK(worst_t_ll <= 1e-9);
  CHECK(worst_t_ln <= 1e-9);
  CHECK(worst_norm <= 1e-9);
  CHECK(worst_cross <= 1e-9);
  // On 2d sources the flux term vanishes identically and the momentum is
  // pinned to the partner direction.
  CHECK(worst_plane <= 1e-9);
}

TEST_CASE("map stress satisfies both classical conditions for any observer") {
  std::mt19937 rng(31415u);
  int dominant_failures = 0;
  int strong_failures = 0;
  double worst_margin_gap = 0.0;  // |margin - (m-2) f(v,v)|
  std::uniform_real_distribution<double> boost(-1.5, 1.5);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int trial = 0; trial < 3000; ++trial) {
    const int m = 2 + trial % 3;
    const int n = 1 + (trial / 3) % 3;
    FuzzGeometry geo = random_geometry(m, rng);
    TensorValue f = random_pullback(m, n, rng);

    // Stress T = f - e g via the observer split of any frame.
    ObserverFrame rest = make_observer_frame(geo.g, geo.v, 1e-8);
    EnergySplit rest_split = energy_split(f, geo.g, rest);
    TensorValue stress = f;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        stress({a, b}) -= rest_split.energy * geo.g({a, b});

    // Extra observers: boosts cosh(a) e0 + sinh(a) u in the flat frame,
    // pulled back through the Gram factor.
    std::vector<ObserverFrame> frames = {rest};
    for (int k = 0; k < 2; ++k) {
      Eigen::VectorXd dir = Eigen::VectorXd::Zero(m);
      double norm = 0.0;
      do {
        for (int i = 1; i < m; ++i) dir(i) = gauss(rng);
        norm = dir.norm();
      } while (norm < 1e-3);
      const double a = boost(rng);
      Eigen::VectorXd w = (std::sinh(a) / norm) * dir;
      w(0) = std::cosh(a);
      frames.push_back(make_observer_frame(geo.g, geo.observer(w), 1e-7));
    }

    EnergyConditionReport rep =
        classical_energy_conditions(stress, geo.g, frames, 1e-9);
    if (!rep.dominant_all) ++dominant_failures;
    if (!rep.strong_all) ++strong_failures;
    CHECK(rep.trace_degenerate == (m == 2));

    for (std::size_t k = 0; k < frames.size(); ++k) {
      const double fvv = pair_with(f, frames[k].v, frames[k].v);
      const double expected = (m - 2.0) * fvv;
      const double scale = std::max(1.0, std::abs(expected));
      worst_margin_gap = std::max(
          worst_margin_gap,
          std::abs(rep.frames[k].strong_margin - expected) / scale);
    }
  }

  CHECK(dominant_failures == 0);
  CHECK(strong_failures == 0);
  // The strong margin of a map stress is exactly (m-2) f(v,v).
  CHECK(worst_margin_gap <= 1e-9);
}

TEST_CASE("radiation residuals vanish on flat space and plane waves") {
  SUBCASE("flat space with a constant lightlike direction") {
    MetricField g = minkowski_metric(4);
    const double r = 1.0 / std::sqrt(2.0);
    VectorField l = constant_field(g.chart(), {r, r, 0.0, 0.0});
    const Point p = {0.4, -0.3, 0.8, 0.1};
    RadiationReport rep = radiation_conditions(g, l, p);
    CHECK(rep.lich1 <= 1e-12);
    CHECK(rep.lich2 <= 1e-12);
    CHECK(rep.bel1 <= 1e-12);
    CHECK(rep.bel2 <= 1e-12);
    CHECK(rep.bel3 <= 1e-12);
    CHECK(rep.ricci_rad1 <= 1e-12);
    CHECK(rep.ricci_rad2 <= 1e-12);
    CHECK(rep.einstein_rad1 <= 1e-12);
    CHECK(rep.einstein_rad2 <= 1e-12);
  }

  SUBCASE("the coupled plane wave is pure radiation along its ray") {
    CatalogEntry wave = coupled_plane_wave(1.0);
    for (const Point& p : {Point{0.3, 0.7, 0.5, -0.4},
                           Point{-2.0, 3.1, -1.2, 0.9},
                           Point{5.0, -4.0, 1.5, 1.5}}) {
      RadiationReport rep =
          radiation_conditions(wave.metric, wave.vector_fields[0].field, p);
      CHECK(rep.max_lichnerowicz() <= 1e-10);
      CHECK(rep.max_bel() <= 1e-10);
      CHECK(rep.ricci_rad1 <= 1e-10);
      CHECK(rep.ricci_rad2 <= 1e-10);
      CHECK(rep.einstein_rad1 <= 1e-10);
      CHECK(rep.einstein_rad2 <= 1e-10);
    }
  }

  SUBCASE("a direction that is not lightlike is rejected") {
    CatalogEntry wave = coupled_plane_wave(1.0);
    const Point p = {0.3, 0.7, 0.5, -0.4};  // H(p) != 0
    CHECK_THROWS_AS(
        radiation_conditions(wave.metric, wave.vector_fields[1].field, p),
        FrameNotNull);
    MetricField flat = minkowski_metric(4);
    VectorField t = constant_field(flat.chart(), {1.0, 0.0, 0.0, 0.0});
    CHECK_THROWS_AS(radiation_conditions(flat, t, Point{0, 0, 0, 0}),
                    FrameNotNull);
  }

  SUBCASE("dimension mismatch is rejected") {
    MetricField flat = minkowski_metric(4);
    MetricField circle = circle_metric();
    VectorField small = constant_field(circle.chart(), {1.0});
    CHECK_THROWS_AS(radiation_conditions(flat, small, Point{0, 0, 0, 0}),
                    ShapeMismatch);
  }
}

TEST_CASE("the second-level radiation conditions are strictly weaker") {
  const Point q = {0.3, -0.5, 0.4, 0.2};

  // Off-diagonal profile with nonvanishing transverse curl
  // F_23 = d2(g13) - d3(g12) = 0.8 x2 - x2 = -0.2 x2, so the mixed Ricci
  // component R_13 = 0.1 in magnitude while the wave-vector contractions
  // stay exact.
  CatalogEntry bel = wave_form_bel("x1*x2 + x3^2", "x2*x3", "0.4*x2^2");
  RadiationReport rep =
      radiation_conditions(bel.metric, bel.vector_fields[0].field, q);

  CHECK(rep.bel1 <= 1e-10);
  CHECK(rep.bel2 <= 1e-10);
  CHECK(rep.bel3 <= 1e-10);
  CHECK(rep.lich1 <= 1e-10);
  CHECK(rep.ricci_rad1 <= 1e-10);
  CHECK(rep.einstein_rad1 <= 1e-10);

  const double r13 = std::abs(ricci(bel.metric, q)({1, 3}));
  CHECK(r13 == doctest::Approx(0.1));
  CHECK(rep.lich2 == doctest::Approx(r13 / 3.0));
  CHECK(rep.ricci_rad2 == doctest::Approx(r13 / 2.0));
  CHECK(rep.einstein_rad2 == doctest::Approx(r13 / 2.0));
  CHECK(rep.lich2 > 1e-3);

  // Whenever the first-level residuals vanish, so do the second-level ones.
  std::vector<CatalogEntry> pure = {
      wave_form_parallel(), coupled_plane_wave(1.0),
      wave_form_lichnerowicz("0.3*x1^2 + x2*x3")};
  for (const CatalogEntry& e : pure) {
    RadiationReport r =
        radiation_conditions(e.metric, e.vector_fields[0].field, q);
    CHECK(r.max_lichnerowicz() <= 1e-10);
    CHECK(r.max_bel() <= 1e-10);
  }

  // A normal form with varying lightlike factor is not pure radiation.
  CatalogEntry kill = wave_form_killing("2 + sin(x2)*cos(x3)");
  RadiationReport kr =
      radiation_conditions(kill.metric, kill.vector_fields[0].field, q);
  CHECK(kr.lich1 > 1e-2);
  CHECK(kr.ricci_rad1 > 1e-2);
}

TEST_CASE("vector field certificates on the catalog geometries") {
  SUBCASE("varying lightlike factor: Killing but not parallel") {
    CatalogEntry kill = wave_form_killing("2 + sin(x2)*cos(x3)");
    const Point q = {0.3, -0.5, 0.4, 0.2};
    VectorFieldCertificates cert =
        vector_field_certificates(kill.metric, kill.vector_fields[0].field, q);
    CHECK(cert.killing <= 1e-12);
    CHECK(cert.hypersurface_orthogonal <= 1e-12);
    // grad_a l_b = (d_a g_0b - d_b g_0a)/2 picks up the transverse
    // derivatives of the lightlike factor.
    CHECK(cert.covariantly_constant ==
          doctest::Approx(0.5 * std::cos(0.4) * std::cos(0.2)));
    CHECK(cert.lightlike <= 1e-12);
  }

  SUBCASE("constant lightlike factor: parallel for any transverse block") {
    CatalogEntry par = wave_form_parallel(
        {"-1-0.5*x2^2", "0.1*x3", "-1.2", "0.2*sin(x1)", "0", "-1-0.1*x1^2"});
    const Point q = {0.3, -0.5, 0.4, 0.2};
    VectorFieldCertificates cert =
        vector_field_certificates(par.metric, par.vector_fields[0].field, q);
    CHECK(cert.killing <= 1e-12);
    CHECK(cert.hypersurface_orthogonal <= 1e-12);
    CHECK(cert.covariantly_constant <= 1e-12);
    CHECK(cert.lightlike <= 1e-12);
  }

  SUBCASE("sphere rotation: Killing, spacelike, not parallel") {
    CatalogEntry s2 = sphere_entry(1.0);
    const Point q = {1.1, 0.7};
    VectorFieldCertificates cert = vector_field_certificates(
        s2.metric, s2.vector_fields[0].field, q);
    CHECK(cert.killing <= 1e-12);
    CHECK(cert.covariantly_constant ==
          doctest::Approx(std::sin(1.1) * std::cos(1.1)));
    // On a 2d chart the three-slot antisymmetrization is identically zero.
    CHECK(cert.hypersurface_orthogonal <= 1e-12);
    CHECK(cert.lightlike == doctest::Approx(std::sin(1.1) * std::sin(1.1)));
  }

  SUBCASE("flat time direction: parallel and unit") {
    MetricField g = minkowski_metric(4);
    VectorField t = constant_field(g.chart(), {1.0, 0.0, 0.0, 0.0});
    VectorFieldCertificates cert =
        vector_field_certificates(g, t, Point{0.1, 0.2, 0.3, 0.4});
    CHECK(cert.killing == 0.0);
    CHECK(cert.covariantly_constant == 0.0);
    CHECK(cert.hypersurface_orthogonal == 0.0);
    CHECK(cert.lightlike == doctest::Approx(1.0));
  }
}
