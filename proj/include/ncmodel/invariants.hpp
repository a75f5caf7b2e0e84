#pragma once

#include "ncmodel/fock.hpp"
#include "ncmodel/row.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ncmodel {

struct CurvatureReport {
  std::string method;
  std::vector<int> m;
  std::vector<double> values;
  double last = 0.0;
  double aitken = 0.0;  // equals last when fewer than three values or a flat tail
  double budget = 0.0;
  std::map<std::string, std::vector<double>> extra;
};

double aitken_extrapolate(const std::vector<double>& seq);

// 1 + n + ... + n^{m-1}
double geometric_denominator(int n, int m);

// values: trace(I - Phi^m(I)) / (1 + ... + n^{m-1}), m = 1..m_max.
// extra "slice": trace(Phi^m(I) - Phi^{m+1}(I)) / n^m, m = 0..m_max.
CurvatureReport curvature_phi(const RowContraction& rc, int m_max);
// values: rank(I - Phi^m(I)) / (1 + ... + n^{m-1}); extra "rank".
CurvatureReport euler_phi(const RowContraction& rc, int m_max);

struct ThetaInvariants {
  // values: rank D_T - trace[Theta Theta^* (P_m (x) I)] / n^m, m = 0..m_max;
  // extra "cesaro": the running-average form, comparable with curvature_phi.
  CurvatureReport curvature;
  // values: rank[(I - Theta Theta^*)(P_{<=m} (x) I)] / (1 + ... + n^{m-1}), m = 1..m_max;
  // extra "rank" with the integer ranks for m = 0..m_max.
  CurvatureReport euler;
  double slice_deviation = 0.0;      // max_m |slice_theta(m) - slice_phi(m)|
  double cesaro_deviation = 0.0;     // max_m |cesaro_theta(m) - curvature_phi(m)|
  double verbatim_deviation = 0.0;   // max_m |slice_theta(m) - curvature_phi(m)|, not expected small
  bool rank_match = false;           // rank_theta(m-1) == rank(I - Phi^m(I))
};

// Needs m_max <= fock.degree().
ThetaInvariants curvature_theta(const RowContraction& rc, const TruncatedFock& fock, int m_max);

struct ArvesonReport {
  std::vector<double> radii;
  std::vector<double> boundary;         // Monte Carlo sphere averages
  std::vector<double> boundary_stderr;
  CurvatureReport q_trace;           // (n-1)! trace[(I - Theta Theta^*)(Q_m (x) I)] / m^{n-1}
  CurvatureReport q_trace_verbatim;  // rank D_T - (n-1)! trace[Theta Theta^*(Q_m (x) I)] / n^m
  CurvatureReport euler;             // n! rank[(I - Theta Theta^*)(Q_{<=m} (x) I)] / m^n
  double deviation = 0.0;            // |boundary at the last radius - q_trace last|
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

ArvesonReport arveson_curvature(const RowContraction& rc, int m_max, std::size_t mc_samples,
                                std::uint64_t seed,
                                std::vector<double> radii = {0.9, 0.99, 0.999});

// Uniform points on the unit sphere of C^n, reproducible from (seed, shard).
std::vector<std::vector<cplx>> sphere_samples(int n, std::size_t count, std::uint64_t seed,
                                              std::uint64_t shard);

}  // namespace ncmodel
