#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace radmax {

/// Known analytic facts about the ideal set a DilationSet discretizes.
/// beta is the upper Minkowski dimension, gamma the (quasi-)Assouad dimension.
struct AnalyticProfile {
  double beta = 0.0;
  double gamma = 0.0;
  bool sup_delta_beta_N_finite = true;  // sup_delta delta^beta N(E,delta) < inf
  bool sup_delta_log_N_finite = true;   // sup_delta delta*log(1/delta)*N(E,delta) < inf
  bool power_law = false;               // N(E,delta) within a bounded factor of delta^-beta
  std::string description;
};

/// Dyadic window J = [1 + position*2^-level, 1 + (position+1)*2^-level].
struct WindowSpec {
  int level = 0;
  std::uint64_t position = 0;
};

/// Signals restrict() hitting an empty E ∩ J; callers treat the count as 0.
struct EmptyWindowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A subset of [1,2] stored as depth-n dyadic cells.
/// Cell j is [1 + j*2^-n, 1 + (j+1)*2^-n]; the list is sorted and duplicate-free.
class DilationSet {
 public:
  static constexpr int kMaxDepth = 30;

  DilationSet(int depth, std::vector<std::uint64_t> cells,
              std::optional<AnalyticProfile> profile = std::nullopt);

  int depth() const { return depth_; }
  const std::vector<std::uint64_t>& cells() const { return cells_; }
  const std::optional<AnalyticProfile>& profile() const { return profile_; }

  double cell_left(std::uint64_t cell) const;
  double cell_right(std::uint64_t cell) const;
  double cell_center(std::uint64_t cell) const;

  /// Merged closed intervals of the union of cells, in [1,2].
  std::vector<std::pair<double, double>> merged_intervals() const;

 private:
  int depth_;
  std::vector<std::uint64_t> cells_;
  std::optional<AnalyticProfile> profile_;
};

// Generator descriptors -------------------------------------------------------

struct FullIntervalSpec {};

struct FinitePointsSpec {
  std::vector<double> points;  // each in [1,2]
};

struct CantorSpec {
  int base = 3;
  std::vector<int> digits;  // kept digits, subset of [0, base)
};

struct ConvexSequenceSpec {
  double beta = 0.5;  // in (0,1); the set is {1 + n^(1-1/beta) : n >= 1}
};

struct AssouadRegularSpec {
  double beta = 0.5;       // in (0,1], beta <= gamma
  double gamma = 1.0;      // in (0,1]
  int milestone_stride = 2;  // levels between consecutive burst roots
};

using GeneratorSpec = std::variant<FullIntervalSpec, FinitePointsSpec, CantorSpec,
                                   ConvexSequenceSpec, AssouadRegularSpec>;

struct SetSpec {
  GeneratorSpec generator;
  int depth = 10;
};

/// Builds the depth-n dyadic discretization of the generator's ideal set
/// (every cell meeting the set) with the analytic profile filled in.
DilationSet generate(const SetSpec& spec);

/// Cells of E contained in window J, at E's depth. Throws EmptyWindowError
/// when E ∩ J is empty.
DilationSet restrict_to(const DilationSet& set, const WindowSpec& window);

/// Distinct depth-m ancestors of E's cells; the length is N(E, 2^-m).
std::vector<std::uint64_t> ancestors(const DilationSet& set, int m);

}  // namespace radmax
