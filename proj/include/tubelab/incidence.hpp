#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tubelab/point_set.hpp"
#include "tubelab/tubes.hpp"

namespace tubelab {

// Points with a designated family of tubes through each of them.
// families[i] belongs to points.point(i); all families live at `scale`.
struct Configuration {
  PointSet points;
  Scale scale{};
  std::vector<TubeFamily> families;
  double s = 0.5;
  double epsilon = 0.0;
};

// Structural checks (family count, scales, even k) plus exact membership of
// every listed tube. Throws PreconditionError / HypothesisError.
void check_configuration(const Configuration& cfg);

struct HypothesisResult {
  std::string name;
  bool holds = true;
  std::string witness;  // JSON; empty when the hypothesis holds
};

struct HypothesisReport {
  std::vector<HypothesisResult> results;
  bool all_hold() const;
  // First failing hypothesis, or nullptr.
  const HypothesisResult* first_failure() const;
};

// Hypothesis names, in evaluation order.
inline constexpr const char* kTubeMembership = "tubes contain their points";
inline constexpr const char* kUnitBall = "points lie in the closed unit ball";
inline constexpr const char* kPointsFrostman = "points form a (delta, 1, delta^-eps)-set";
inline constexpr const char* kPointsLarge = "|P| >= delta^(-1+eps)";
inline constexpr const char* kCoarseSparse = "N(P, delta^1/2) <= delta^(-1/2-eps)";
inline constexpr const char* kSlopesFrostman = "slope sets form (delta, s, delta^-eps)-sets";
inline constexpr const char* kFamiliesLarge = "|T_p| >= delta^(-s+eps)";

HypothesisReport check_hypotheses(const Configuration& cfg);

// Smallest eps >= 0 for which every quantitative hypothesis holds.
double required_epsilon(const Configuration& cfg);

TubeFamily union_tubes(const Configuration& cfg);

struct IncidenceReport {
  std::uint64_t incidence_count = 0;
  std::uint64_t tube_count = 0;
  std::uint64_t coarse_tube_count = 0;
  std::uint64_t coarse_ball_count = 0;
  std::uint64_t incidence_by_tubes = 0;  // sum over T of N_T
  std::map<std::uint64_t, std::uint64_t> nt_histogram;  // N_T -> number of tubes
  std::map<std::uint64_t, std::uint64_t> mt_histogram;  // M_T -> number of coarse tubes
  double e_tubes = 0.0;
  double e_coarse = 0.0;
  bool hypotheses_verified = false;
  int k = 0;
  std::size_t points = 0;
};

// Membership is enforced; the remaining hypotheses are evaluated and stamped.
IncidenceReport incidence_report(const Configuration& cfg);

// Number of tubes with N_T >= delta^-theta.
std::uint64_t tubes_with_multiplicity_at_least(const IncidenceReport& rep, double theta);

struct CauchySchwarzReport {
  double lhs = 0.0;  // |I(P, T)|
  double rhs = 0.0;  // |T|^1/2 (|I| + sum_{p != q} |T_p ∩ T_q|)^1/2
  std::uint64_t intersection_term = 0;
  double implied_bound = 0.0;  // |I|^2 / (|I| + intersection_term)
  bool holds = false;
};

CauchySchwarzReport cauchy_schwarz_bound(const Configuration& cfg);

struct PairwiseBoundReport {
  double max_constant = 0.0;  // max |T_p ∩ T_q| / (1/|p - q| + 1)
  std::size_t pairs_with_overlap = 0;
  std::size_t worst_p = 0;
  std::size_t worst_q = 0;
  std::uint64_t worst_count = 0;
};

PairwiseBoundReport pairwise_intersection_bound_check(const Configuration& cfg);

struct DichotomyVerdict {
  bool pass = false;
  double slack = 0.0;
  double e_tubes = 0.0;
  double e_coarse = 0.0;
  double margin_tubes = 0.0;   // e_T - (2s - slack)
  double margin_coarse = 0.0;  // e_coarse - (s - slack)
  IncidenceReport report;
};

// Throws HypothesisError naming the first failed hypothesis.
DichotomyVerdict dichotomy_check(const Configuration& cfg, double slack);

struct CoarseEnergyReport {
  double sum = 0.0;  // over ordered pairs of distinct coarse cells
  double normalized = 0.0;  // sum * delta
  std::size_t cells = 0;
};

CoarseEnergyReport coarse_energy_check(const Configuration& cfg);

struct AuxLemmaReport {
  std::uint64_t max_children = 0;  // max over p, T0 of |{T ∈ T_p : T ⊂ T0}|
  double max_ratio = 0.0;           // max of that count / (C_p (delta^-1/2)^s)
  bool holds = false;               // max_ratio <= 4
};

// C_p is the validated constant of s(T_p), i.e. its worst ratio at C = 1.
AuxLemmaReport aux_lemma_check(const Configuration& cfg);

}  // namespace tubelab
