#include "ncmodel/invariants.hpp"

#include "ncmodel/charfn.hpp"
#include "ncmodel/error.hpp"
#include "ncmodel/ideal.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace ncmodel {

namespace {

constexpr std::size_t kShardSize = 4096;

double trace_re(const Mat& a) { return a.trace().real(); }

double factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

void finish(CurvatureReport& r) {
  r.last = r.values.empty() ? 0.0 : r.values.back();
  r.aitken = aitken_extrapolate(r.values);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double aitken_extrapolate(const std::vector<double>& s) {
  if (s.size() < 3) return s.empty() ? 0.0 : s.back();
  double a = s[s.size() - 3], b = s[s.size() - 2], c = s[s.size() - 1];
  double den = c - 2.0 * b + a;
  if (std::abs(den) <= 1e-14 * std::max(1.0, std::abs(c))) return c;
  return c - (c - b) * (c - b) / den;
}

double geometric_denominator(int n, int m) {
  double s = 0.0, p = 1.0;
  for (int k = 0; k < m; ++k) {
    s += p;
    p *= n;
  }
  return s;
}

CurvatureReport curvature_phi(const RowContraction& rc, int m_max) {
  if (m_max < 1) throw Error(ErrorKind::invalid_parameter, "m_max must be >= 1");
  CurvatureReport out;
  out.method = "phi_limit";
  const Mat eye = identity(rc.dim());
  std::vector<Mat> x{eye};
  for (int m = 1; m <= m_max + 1; ++m) x.push_back(cp_map(rc.ops(), x.back()));
  std::vector<double> slice;
  for (int m = 0; m <= m_max; ++m) slice.push_back(trace_re(x[m] - x[m + 1]) / std::pow(rc.n(), m));
  for (int m = 1; m <= m_max; ++m) {
    out.m.push_back(m);
    out.values.push_back(trace_re(eye - x[m]) / geometric_denominator(rc.n(), m));
  }
  out.extra["slice"] = std::move(slice);
  finish(out);
  return out;
}

CurvatureReport euler_phi(const RowContraction& rc, int m_max) {
  if (m_max < 1) throw Error(ErrorKind::invalid_parameter, "m_max must be >= 1");
  CurvatureReport out;
  out.method = "phi_rank";
  const Mat eye = identity(rc.dim());
  Mat x = eye;
  std::vector<double> ranks;
  for (int m = 1; m <= m_max; ++m) {
    x = cp_map(rc.ops(), x);
    double r = static_cast<double>(psd_rank(eye - x, 1.0));
    ranks.push_back(r);
    out.m.push_back(m);
    out.values.push_back(r / geometric_denominator(rc.n(), m));
  }
  out.extra["rank"] = std::move(ranks);
  finish(out);
  return out;
}

ThetaInvariants curvature_theta(const RowContraction& rc, const TruncatedFock& fock, int m_max) {
  if (m_max < 1 || m_max > fock.degree())
    throw Error(ErrorKind::invalid_parameter, "m_max must lie in [1, truncation degree]");
  const int n = rc.n();
  const Index d = rc.defect_rank();
  MultiAnalyticOperator op = characteristic_coefficients(rc, std::max(1, fock.degree()));
  Mat theta = assemble(op, fock);

  std::vector<double> slice_trace(m_max + 1, 0.0);
  for (int m = 0; m <= m_max; ++m)
    for (Index r = fock.slice_offset(m) * d; r < fock.slice_offset(m + 1) * d; ++r)
      slice_trace[m] += theta.row(r).squaredNorm();

  ThetaInvariants out;
  CurvatureReport& c = out.curvature;
  c.method = "theta_formula";
  std::vector<double> cesaro;
  double running = 0.0;
  for (int m = 0; m <= m_max; ++m) {
    c.m.push_back(m);
    c.values.push_back(static_cast<double>(d) - slice_trace[m] / std::pow(n, m));
    if (m >= 1) {
      double den = geometric_denominator(n, m);
      cesaro.push_back((static_cast<double>(d) * den - running) / den);
    }
    running += slice_trace[m];
  }
  c.extra["cesaro"] = cesaro;
  c.budget = 1e-8;
  finish(c);

  CurvatureReport& e = out.euler;
  e.method = "theta_rank";
  std::vector<double> ranks;
  for (int m = 0; m <= m_max; ++m) {
    const Index cols = fock.slice_offset(m + 1) * d;
    Mat block = Mat::Identity(theta.rows(), cols) - theta * theta.topRows(cols).adjoint();
    ranks.push_back(static_cast<double>(numerical_rank(block, 1.0)));
    if (m >= 1) {
      e.m.push_back(m);
      e.values.push_back(ranks.back() / geometric_denominator(n, m));
    }
  }
  e.extra["rank"] = ranks;
  finish(e);

  CurvatureReport phi = curvature_phi(rc, m_max);
  CurvatureReport chi = euler_phi(rc, m_max);
  const auto& pslice = phi.extra.at("slice");
  for (int m = 0; m <= m_max; ++m)
    out.slice_deviation = std::max(out.slice_deviation, std::abs(c.values[m] - pslice[m]));
  out.rank_match = true;
  for (int m = 1; m <= m_max; ++m) {
    out.cesaro_deviation = std::max(out.cesaro_deviation, std::abs(cesaro[m - 1] - phi.values[m - 1]));
    out.verbatim_deviation = std::max(out.verbatim_deviation, std::abs(c.values[m] - phi.values[m - 1]));
    if (ranks[m - 1] != chi.extra.at("rank")[m - 1]) out.rank_match = false;
  }
  return out;
}

std::vector<std::vector<cplx>> sphere_samples(int n, std::size_t count, std::uint64_t seed,
                                              std::uint64_t shard) {
  std::mt19937_64 gen(splitmix64(seed ^ splitmix64(shard + 1)));
  auto uniform = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<std::vector<cplx>> out(count, std::vector<cplx>(n));
  for (auto& p : out) {
    double norm2 = 0.0;
    for (auto& z : p) {
      double u1 = uniform() + 0x1.0p-53;  // (0, 1]
      double u2 = uniform();
      double rad = std::sqrt(-2.0 * std::log(u1));
      z = cplx(rad * std::cos(2.0 * std::numbers::pi * u2), rad * std::sin(2.0 * std::numbers::pi * u2));
      norm2 += std::norm(z);
    }
    double s = 1.0 / std::sqrt(norm2);
    for (auto& z : p) z *= s;
  }
  return out;
}

ArvesonReport arveson_curvature(const RowContraction& rc, int m_max, std::size_t mc_samples,
                                std::uint64_t seed, std::vector<double> radii) {
  const int n = rc.n();
  auto comm = commutator_generators(n);
  if (!satisfies_constraints(rc.ops(), comm))
    throw Error(ErrorKind::precondition, "Arveson curvature needs a commuting tuple");
  if (m_max < 1) throw Error(ErrorKind::invalid_parameter, "m_max must be >= 1");
  if (mc_samples == 0) throw Error(ErrorKind::invalid_parameter, "mc_samples must be positive");

  ArvesonReport out;
  out.radii = radii;
  out.samples = mc_samples;
  out.seed = seed;
  const Index h = rc.dim();
  const Mat de = rc.delta() * rc.defect_basis();  // Delta_T E_T

  // I - Theta(z)Theta(z)^* = (1 - |z|^2) Delta (I - sum z_i T_i^*)^{-1} (I - sum conj(z_i) T_i)^{-1} Delta
  std::vector<double> sum(radii.size(), 0.0), sum2(radii.size(), 0.0);
  const std::size_t shards = (mc_samples + kShardSize - 1) / kShardSize;
  for (std::size_t s = 0; s < shards; ++s) {
    std::size_t cnt = std::min(kShardSize, mc_samples - s * kShardSize);
    auto pts = sphere_samples(n, cnt, seed, s);
    for (const auto& xi : pts) {
      for (std::size_t k = 0; k < radii.size(); ++k) {
        double r = radii[k];
        Mat a = identity(h);
        for (int i = 0; i < n; ++i) a -= (r * xi[i]) * rc.ops()[i].adjoint();
        // trace = ||A^{-*} Delta E||_F^2
        Mat y = Mat(a.adjoint()).partialPivLu().solve(de);
        double v = (1.0 - r * r) * y.squaredNorm();
        sum[k] += v;
        sum2[k] += v * v;
      }
    }
  }
  const double cnt = static_cast<double>(mc_samples);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    double mean = sum[k] / cnt;
    double var = std::max(0.0, sum2[k] / cnt - mean * mean);
    out.boundary.push_back(mean);
    out.boundary_stderr.push_back(std::sqrt(var / cnt));
  }

  auto cs = build_constrained_subspace(TruncatedFock(n, m_max), comm);
  ConstrainedShifts shifts = constrained_shifts(*cs);
  Mat theta = symbol_at(rc, shifts.W);
  const Index d = rc.defect_rank();
  const auto& deg = cs->column_degrees();
  std::vector<double> kk(m_max + 1, 0.0), tt(m_max + 1, 0.0);
  for (Index j = 0; j < cs->dim(); ++j)
    for (Index k = 0; k < d; ++k) {
      double rn = theta.row(j * d + k).squaredNorm();
      tt[deg[j]] += rn;
      kk[deg[j]] += 1.0 - rn;
    }

  out.q_trace.method = "q_trace";
  out.q_trace_verbatim.method = "q_trace_verbatim";
  out.euler.method = "q_rank";
  const double f1 = factorial(n - 1), f0 = factorial(n);
  const Mat ttstar = theta * theta.adjoint();
  for (int m = 1; m <= m_max; ++m) {
    out.q_trace.m.push_back(m);
    out.q_trace.values.push_back(f1 * kk[m] / std::pow(m, n - 1));
    out.q_trace_verbatim.m.push_back(m);
    out.q_trace_verbatim.values.push_back(static_cast<double>(d) - f1 * tt[m] / std::pow(n, m));

    std::vector<Index> cols;
    for (Index j = 0; j < cs->dim(); ++j)
      if (deg[j] <= m)
        for (Index k = 0; k < d; ++k) cols.push_back(j * d + k);
    Mat block(ttstar.rows(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      block.col(static_cast<Index>(c)) = -ttstar.col(cols[c]);
      block(cols[c], static_cast<Index>(c)) += 1.0;
    }
    out.euler.m.push_back(m);
    out.euler.values.push_back(f0 * static_cast<double>(numerical_rank(block, 1.0)) / std::pow(m, n));
  }
  finish(out.q_trace);
  finish(out.q_trace_verbatim);
  finish(out.euler);
  out.q_trace.budget = 2e-2;
  out.deviation = out.boundary.empty() ? 0.0 : std::abs(out.boundary.back() - out.q_trace.last);
  return out;
}

}  // namespace ncmodel
