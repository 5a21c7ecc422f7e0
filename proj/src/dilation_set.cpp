#include "radmax/dilation_set.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace radmax {

namespace {

void validate_depth(int depth) {
  if (depth < 1 || depth > DilationSet::kMaxDepth)
    throw std::out_of_range("depth must be in [1, 30], got " + std::to_string(depth));
}

std::uint64_t clamp_cell(std::uint64_t idx, int depth) {
  const std::uint64_t last = (std::uint64_t{1} << depth) - 1;
  return idx > last ? last : idx;
}

std::uint64_t point_cell(double t01, int depth) {
  // Half-open convention: a point on a cell boundary belongs to the right cell,
  // so finite point sets mark at most one cell per point.
  if (t01 < 0) t01 = 0;
  auto idx = static_cast<std::uint64_t>(std::floor(std::ldexp(t01, depth)));
  return clamp_cell(idx, depth);
}

std::vector<std::uint64_t> finish(std::vector<std::uint64_t> cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

// --- cantor ------------------------------------------------------------------

// Marks every depth-n dyadic cell whose closed interval meets the closed
// base-b interval [A/b^L, (A+1)/b^L]; descends while b^-L > 2^-n.
void mark_cantor(std::uint64_t A, __int128 bL, const CantorSpec& g, int depth,
                 std::vector<std::uint64_t>& out) {
  const __int128 two_n = __int128{1} << depth;
  if (bL >= two_n) {
    const __int128 lo = static_cast<__int128>(A) * two_n;
    const __int128 hi = (static_cast<__int128>(A) + 1) * two_n;
    __int128 j_min = (lo + bL - 1) / bL - 1;
    if (j_min < 0) j_min = 0;
    __int128 j_max = hi / bL;
    if (j_max > two_n - 1) j_max = two_n - 1;
    for (__int128 j = j_min; j <= j_max; ++j)
      out.push_back(static_cast<std::uint64_t>(j));
    return;
  }
  for (int d : g.digits)
    mark_cantor(A * g.base + static_cast<std::uint64_t>(d), bL * g.base, g, depth, out);
}

// --- assouad-regular ---------------------------------------------------------

bool increments(double dim, int i) {
  return std::floor(dim * i) > std::floor(dim * (i - 1));
}

// Backbone-plus-staggered-bursts tree realizing window counts
// N(E∩J, 2^-m) ≈ 2^{min(gamma*(m-k), beta*m)} for level-k windows J.
//
// Backbone: doubles whenever floor(beta*i) increments, left child otherwise;
// its leftmost spine is cell 0 at every level. A burst rooted at spine level j
// starts as cell 1 at level j+1, doubles whenever floor(gamma*i) increments
// for ceil(beta*j/(gamma-beta)) levels, then continues as single left chains.
// Bursts are pairwise disjoint and all contained in the leftmost level-k
// window for every k below their root, which caps window counts at the
// global 2^{beta*m} rate.
std::vector<std::uint64_t> build_assouad_regular(const AssouadRegularSpec& g, int depth) {
  std::vector<std::uint64_t> backbone{0};
  for (int i = 1; i <= depth; ++i) {
    std::vector<std::uint64_t> next;
    next.reserve(backbone.size() * 2);
    const bool doubling = increments(g.beta, i);
    for (std::uint64_t c : backbone) {
      next.push_back(2 * c);
      if (doubling) next.push_back(2 * c + 1);
    }
    backbone = std::move(next);
  }

  std::vector<std::uint64_t> cells = backbone;
  if (g.gamma > g.beta + 1e-12) {
    for (int j = 2; j + 1 <= depth; j += g.milestone_stride) {
      const int span = static_cast<int>(std::ceil(g.beta * j / (g.gamma - g.beta)));
      std::vector<std::uint64_t> burst{1};  // right child of spine cell 0 at level j+1
      for (int i = j + 2; i <= depth; ++i) {
        std::vector<std::uint64_t> next;
        next.reserve(burst.size() * 2);
        const bool doubling = (i <= j + span) && increments(g.gamma, i);
        for (std::uint64_t c : burst) {
          next.push_back(2 * c);
          if (doubling) next.push_back(2 * c + 1);
        }
        burst = std::move(next);
      }
      cells.insert(cells.end(), burst.begin(), burst.end());
    }
  }
  return cells;
}

// --- convex sequence ---------------------------------------------------------

std::vector<std::uint64_t> build_convex_sequence(const ConvexSequenceSpec& g, int depth) {
  const double a = 1.0 / g.beta - 1.0;
  const double width = std::ldexp(1.0, -depth);
  std::vector<std::uint64_t> cells;
  // Sparse regime: consecutive terms are more than one cell apart.
  double t_prev = 1.0;  // n = 1
  std::uint64_t n = 1;
  cells.push_back(point_cell(t_prev, depth));
  while (true) {
    ++n;
    const double t = std::pow(static_cast<double>(n), -a);
    if (t_prev - t < width || t < width) {
      // Dense regime: terms descend through every cell from here to the
      // accumulation point, so mark the full prefix.
      const std::uint64_t top = point_cell(t, depth);
      for (std::uint64_t j = 0; j <= top; ++j) cells.push_back(j);
      break;
    }
    cells.push_back(point_cell(t, depth));
    t_prev = t;
  }
  return cells;
}

}  // namespace

DilationSet::DilationSet(int depth, std::vector<std::uint64_t> cells,
                         std::optional<AnalyticProfile> profile)
    : depth_(depth), cells_(std::move(cells)), profile_(std::move(profile)) {
  validate_depth(depth_);
  if (cells_.empty()) throw std::invalid_argument("empty dilation set");
  const std::uint64_t limit = std::uint64_t{1} << depth_;
  std::uint64_t prev = 0;
  bool first = true;
  for (std::uint64_t c : cells_) {
    if (c >= limit) throw std::invalid_argument("cell index out of range");
    if (!first && c <= prev) throw std::invalid_argument("cells must be strictly increasing");
    prev = c;
    first = false;
  }
}

double DilationSet::cell_left(std::uint64_t cell) const {
  return 1.0 + std::ldexp(static_cast<double>(cell), -depth_);
}
double DilationSet::cell_right(std::uint64_t cell) const {
  return 1.0 + std::ldexp(static_cast<double>(cell) + 1.0, -depth_);
}
double DilationSet::cell_center(std::uint64_t cell) const {
  return 1.0 + std::ldexp(static_cast<double>(cell) + 0.5, -depth_);
}

std::vector<std::pair<double, double>> DilationSet::merged_intervals() const {
  std::vector<std::pair<double, double>> out;
  std::uint64_t run_begin = cells_.front();
  std::uint64_t prev = cells_.front();
  for (std::size_t i = 1; i <= cells_.size(); ++i) {
    if (i < cells_.size() && cells_[i] == prev + 1) {
      prev = cells_[i];
      continue;
    }
    out.emplace_back(cell_left(run_begin), cell_right(prev));
    if (i < cells_.size()) run_begin = prev = cells_[i];
  }
  return out;
}

DilationSet generate(const SetSpec& spec) {
  validate_depth(spec.depth);
  const int depth = spec.depth;
  AnalyticProfile profile;
  std::vector<std::uint64_t> cells;

  if (std::holds_alternative<FullIntervalSpec>(spec.generator)) {
    const std::uint64_t total = std::uint64_t{1} << depth;
    cells.resize(total);
    for (std::uint64_t j = 0; j < total; ++j) cells[j] = j;
    profile = {1.0, 1.0, true, false, true, "full_interval"};
  } else if (const auto* g = std::get_if<FinitePointsSpec>(&spec.generator)) {
    if (g->points.empty()) throw std::invalid_argument("finite_points needs at least one point");
    for (double x : g->points) {
      if (x < 1.0 || x > 2.0)
        throw std::invalid_argument("finite_points entries must lie in [1,2]");
      cells.push_back(point_cell(x - 1.0, depth));
    }
    profile = {0.0, 0.0, true, true, true, "finite_points"};
  } else if (const auto* g = std::get_if<CantorSpec>(&spec.generator)) {
    if (g->base < 2 || g->base > 16) throw std::invalid_argument("cantor base must be in [2,16]");
    std::set<int> digits(g->digits.begin(), g->digits.end());
    if (digits.empty()) throw std::invalid_argument("cantor needs at least one digit");
    for (int d : digits)
      if (d < 0 || d >= g->base) throw std::invalid_argument("cantor digit out of range");
    CantorSpec canon{g->base, std::vector<int>(digits.begin(), digits.end())};
    mark_cantor(0, 1, canon, depth, cells);
    const double beta = std::log(static_cast<double>(digits.size())) / std::log(g->base);
    profile = {beta, beta, true, beta < 1.0, true, "cantor"};
  } else if (const auto* g = std::get_if<ConvexSequenceSpec>(&spec.generator)) {
    if (!(g->beta > 0.0 && g->beta < 1.0))
      throw std::invalid_argument("convex_sequence beta must be in (0,1)");
    cells = build_convex_sequence(*g, depth);
    profile = {g->beta, 1.0, true, true, true, "convex_sequence"};
  } else if (const auto* g = std::get_if<AssouadRegularSpec>(&spec.generator)) {
    if (!(g->beta > 0.0 && g->beta <= g->gamma && g->gamma <= 1.0))
      throw std::invalid_argument("assouad_regular requires 0 < beta <= gamma <= 1");
    if (g->milestone_stride < 1)
      throw std::invalid_argument("assouad_regular stride must be >= 1");
    cells = build_assouad_regular(*g, depth);
    profile = {g->beta, g->gamma, true, g->beta < 1.0, true, "assouad_regular"};
  } else {
    throw std::invalid_argument("unknown generator");
  }

  return DilationSet(depth, finish(std::move(cells)), profile);
}

DilationSet restrict_to(const DilationSet& set, const WindowSpec& window) {
  if (window.level < 0 || window.level > set.depth())
    throw std::out_of_range("window level must be in [0, depth]");
  if (window.position >= (std::uint64_t{1} << window.level))
    throw std::out_of_range("window position out of range");
  const int shift = set.depth() - window.level;
  std::vector<std::uint64_t> kept;
  for (std::uint64_t c : set.cells())
    if ((c >> shift) == window.position) kept.push_back(c);
  if (kept.empty()) throw EmptyWindowError("empty intersection with window");
  return DilationSet(set.depth(), std::move(kept), set.profile());
}

std::vector<std::uint64_t> ancestors(const DilationSet& set, int m) {
  if (m < 0 || m > set.depth()) throw std::out_of_range("ancestor level out of range");
  const int shift = set.depth() - m;
  std::vector<std::uint64_t> out;
  out.reserve(set.cells().size());
  std::uint64_t prev = ~std::uint64_t{0};
  for (std::uint64_t c : set.cells()) {
    const std::uint64_t a = c >> shift;
    if (out.empty() || a != prev) {
      out.push_back(a);
      prev = a;
    }
  }
  return out;
}

}  // namespace radmax
