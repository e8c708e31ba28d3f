// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "polywidth/apmod.hpp"
#include "polywidth/birthday.hpp"
#include "polywidth/cli.hpp"
#include "polywidth/gwidth.hpp"
#include "polywidth/hypergraph.hpp"
#include "polywidth/poly.hpp"
#include "polywidth/randsets.hpp"
#include "polywidth/tensorlift.hpp"
#include "support/generators.hpp"

namespace pw = polywidth;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Collects failures for one criterion; the first few are reported.
class Criterion {
 public:
  void require(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& text) { info_ += (info_.empty() ? "" : ", ") + text; }
  bool ok() const { return failures_ == 0; }
  std::string summary() const { return ok() ? info_ : notes_; }

 private:
  int failures_ = 0;
  std::string notes_;
  std::string info_;
};

int g_failed = 0;

void run(const std::string& id, const std::string& title,
         const std::function<void(Criterion&)>& body) {
  Criterion c;
  const auto start = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed = seconds_since(start);
  std::cout << fmt::format("{} {}: {} ({}; {:.1f}s)", c.ok() ? "PASS" : "FAIL", id, title,
                           c.summary(), elapsed)
            << std::endl;
  if (!c.ok()) ++g_failed;
}

std::uint64_t factorial(std::size_t r) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= r; ++i) f *= i;
  return f;
}

// ---------------------------------------------------------------------------
// Lift instances shared by the matrix criteria.

struct LiftInstance {
  pw::Hypergraph graph;
  pw::LiftParams params;
};

std::vector<LiftInstance> lift_instances() {
  std::mt19937_64 rng(2026);
  std::vector<LiftInstance> out;
  for (std::size_t r = 1; r <= 2; ++r) {
    for (int i = 0; i < 12; ++i) {
      const std::size_t n = 2 * r + 1 + rng() % (11 - 2 * r - 1);
      const std::size_t m = r + rng() % (4 - r);
      const std::size_t edges = 1 + rng() % 6;
      out.push_back({pw::testing::random_uniform_hypergraph(rng, n, 2 * r, edges),
                     pw::LiftParams{n, m, r, pw::default_constants(r).s}});
    }
  }
  return out;
}

// <A y, y> with y the tensor power of x, evaluated entry by entry.
std::int64_t quadratic_form(const pw::SparseMatrix& a, const std::vector<std::int64_t>& x,
                            std::size_t m, std::size_t n) {
  auto coord = [&](std::uint64_t rank) {
    std::int64_t p = 1;
    for (std::size_t i = 0; i < m; ++i) {
      p *= x[rank % n];
      rank /= n;
    }
    return p;
  };
  std::int64_t sum = 0;
  for (const auto& e : a.entries()) sum += e.value * coord(e.row) * coord(e.col);
  return sum;
}

void ac1(Criterion& c) {
  const auto start = Clock::now();
  const auto instances = lift_instances();
  std::size_t oracle_checked = 0;
  for (const auto& inst : instances) {
    const auto& p = inst.params;
    const pw::MatrixLemma lemma = pw::build_matrix_lemma(inst.graph, p);
    const pw::LiftVerification v =
        pw::verify_lift_identity(inst.graph, lemma.matrix, lemma.cover_count, p.m);
    c.require(v.holds && v.vectors_checked == (std::uint64_t{1} << p.n),
              fmt::format("library check failed n={} m={} r={}", p.n, p.m, p.r));
    // Independent evaluation of both sides on every sign vector.
    const auto num = static_cast<std::int64_t>(lemma.cover_count.num);
    const auto den = static_cast<std::int64_t>(lemma.cover_count.den);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p.n); ++mask) {
      const auto x = pw::testing::signs_of(p.n, mask);
      const std::int64_t lhs = quadratic_form(lemma.matrix, x, p.m, p.n);
      if (lhs * den != 2 * num * pw::testing::brute_pH(inst.graph, x)) {
        c.require(false, fmt::format("oracle mismatch n={} m={} r={} mask={}", p.n, p.m, p.r, mask));
        break;
      }
    }
    ++oracle_checked;
  }
  const double elapsed = seconds_since(start);
  c.require(instances.size() >= 20, "fewer than 20 instances");
  c.require(elapsed < 60.0, fmt::format("runtime {:.1f}s >= 60s", elapsed));
  c.note(fmt::format("{} instances, all sign vectors", oracle_checked));
}

void ac2(Criterion& c) {
  std::size_t matchings = 0;
  for (const auto& inst : lift_instances()) {
    const auto coloring = pw::greedy_edge_coloring(inst.graph);
    for (const auto& cls : pw::color_classes(inst.graph, coloring)) {
      const pw::Hypergraph full = pw::complete_to_maximal_matching(cls, inst.params.r);
      const pw::PairSet P = pw::build_pair_set(inst.params, full);
      const auto& cc = P.cover_counts;
      c.require(!cc.empty() && std::all_of(cc.begin(), cc.end(),
                                           [&](std::uint64_t v) { return v == cc.front(); }),
                "cover counts differ across S");
      // Each covering pair covers exactly one block.
      std::uint64_t total = 0;
      for (auto v : cc) total += v;
      c.require(total == P.pairs.size(), "cover counts do not partition the pair set");
      ++matchings;
    }
  }
  c.note(fmt::format("{} maximal matchings", matchings));
}

void ac3(Criterion& c) {
  std::size_t checked = 0;
  for (const auto& inst : lift_instances()) {
    const auto& p = inst.params;
    const pw::MatrixLemma lemma = pw::build_matrix_lemma(inst.graph, p);
    const auto& rep = lemma.report;
    const std::uint64_t rf = factorial(p.r);
    c.require(rep.max_pair_row_count <= p.s * rf, "row count above s r!");
    c.require(rep.max_pair_col_count <= p.s * p.s * rf, "column count above s^2 r!");
    const auto bound = static_cast<std::int64_t>(2 * pw::degree_profile(inst.graph).max_degree *
                                                 p.s * p.s * rf);
    c.require(rep.norm_bound == bound, "reported norm bound differs from 2 Delta s^2 r!");
    // Independent max row sum.
    std::vector<std::int64_t> rows(lemma.matrix.dim(), 0);
    for (const auto& e : lemma.matrix.entries()) rows[e.row] += std::abs(e.value);
    const std::int64_t row_sum = rows.empty() ? 0 : *std::max_element(rows.begin(), rows.end());
    c.require(row_sum == rep.max_row_sum, "max row sum mismatch");
    c.require(row_sum <= bound, "max row sum above 2 Delta s^2 r!");
    const pw::SpectralNormResult norm = pw::spectral_norm(lemma.matrix);
    c.require(norm.estimate <= static_cast<double>(row_sum) * (1 + 1e-9) + 1e-9,
              "spectral norm above max row sum");
    ++checked;
  }
  c.note(fmt::format("{} instances, s = 200*4^r", checked));
}

// ---------------------------------------------------------------------------
// Birthday runs shared by AC4 and AC5.

struct BirthdayRun {
  pw::BirthdayParams params;
  pw::BirthdayStats stats;
};

const std::vector<BirthdayRun>& birthday_runs(double* elapsed = nullptr) {
  static double took = 0.0;
  static const std::vector<BirthdayRun> runs = [] {
    const auto start = Clock::now();
    std::vector<BirthdayRun> out;
    for (auto [r, n] : {std::pair<std::size_t, std::size_t>{2, 600}, {1, 100}}) {
      const pw::BirthdayParams p = pw::BirthdayParams::with_defaults(r, n);
      const pw::Hypergraph M = pw::greedy_maximal_matching(n, r);
      out.push_back({p, pw::birthday_statistics(p, M, {10000, 7, 1})});
    }
    took = seconds_since(start);
    return out;
  }();
  if (elapsed) *elapsed = took;
  return runs;
}

void ac4(Criterion& c) {
  double elapsed = 0.0;
  const auto& runs = birthday_runs(&elapsed);
  c.require(runs[0].params.m == 139 && runs[0].params.s == 3200, "r=2 defaults are not m=139 s=3200");
  c.require(runs[1].params.m == 16, "r=1 default m is not 16");
  for (const auto& run : runs) {
    const auto& g = run.stats.p_good;
    c.require(g.mean >= 0.5 - 3 * g.std_error,
              fmt::format("r={} Pr[good]={} below 0.5", run.params.r, g.mean));
    c.note(fmt::format("r={} n={} m={} Pr[good]={:.4f}", run.params.r, run.params.n, run.params.m,
                       g.mean));
  }
  c.require(elapsed < 30.0, fmt::format("runtime {:.1f}s >= 30s", elapsed));
}

void ac5(Criterion& c) {
  for (const auto& run : birthday_runs()) {
    const double four_r = std::pow(4.0, static_cast<double>(run.params.r));
    const auto& above = run.stats.p_above_markov;
    const auto& mean = run.stats.mean_phi;
    c.require(above.mean <= 0.25 + 3 * above.std_error, "Pr[phi > 200*4^r] above 0.25");
    c.require(mean.mean <= 50 * four_r + 3 * mean.std_error, "E[phi] above 50*4^r");
    c.note(fmt::format("r={} E[phi]={:.3f} Pr[phi>{}]={:.4f}", run.params.r, mean.mean,
                       200 * four_r, above.mean));
  }
}

void ac6(Criterion& c) {
  const pw::ChiSquareResult chi = pw::poisson_sum_chi_square(1.5, 2.5, {100000, 11, 1}, 1e-3);
  c.require(chi.pass && chi.p_value >= 1e-3, fmt::format("chi-square p={}", chi.p_value));
  c.note(fmt::format("chi2={:.2f} dof={} p={:.3f}", chi.statistic, chi.dof, chi.p_value));
  struct Case {
    std::size_t r, n, m;
  };
  // Default m makes psi vanish almost surely; m=20 exercises it.
  for (const Case& k : {Case{2, 600, 139}, Case{2, 600, 20}, Case{1, 100, 16}}) {
    pw::BirthdayParams p = pw::BirthdayParams::with_defaults(k.r, k.n);
    p.m = k.m;
    const pw::Hypergraph M = pw::greedy_maximal_matching(k.n, k.r);
    const auto rep = pw::poisson_domination_check(p, M, {100000, 12, 1});
    for (const auto* side : {&rep.psi, &rep.chi}) {
      const double slack = 3 * std::hypot(side->lhs.std_error, 2 * side->rhs.std_error);
      c.require(side->lhs.mean <= 2 * side->rhs.mean + slack,
                fmt::format("domination fails r={} m={}", k.r, k.m));
      c.require(side->holds, "library verdict disagrees");
    }
    c.note(fmt::format("m={} psi {:.4f}<=2*{:.4f} chi {:.3f}<=2*{:.3f}", k.m, rep.psi.lhs.mean,
                       rep.psi.rhs.mean, rep.chi.lhs.mean, rep.chi.rhs.mean));
  }
}

void ac7(Criterion& c) {
  const double expected = 10.0 / std::sqrt(2.0 * std::numbers::pi);
  const pw::McEstimate id =
      pw::gw_estimate(pw::PointDomain::hypercube_image(pw::identity_map(10)), {10000, 21, 1});
  c.require(std::abs(id.mean - expected) <= 0.03 * expected,
            fmt::format("identity gw {} vs {}", id.mean, expected));
  const pw::McEstimate single =
      pw::gw_estimate(pw::PointDomain::explicit_points({{3.0, -2.0, 1.0}}), {10000, 22, 1});
  c.require(std::abs(single.mean) <= 3 * single.std_error,
            fmt::format("singleton gw {} se {}", single.mean, single.std_error));
  c.note(fmt::format("identity {:.4f} vs {:.4f}, singleton {:.4f} (se {:.4f})", id.mean, expected,
                     single.mean, single.std_error));
}

void ac8(Criterion& c) {
  std::vector<double> ratios;
  for (std::size_t N : {64, 128, 256, 512}) {
    const auto family = pw::random_matching_family(N, N / 4, 31);
    const pw::TjResult r = pw::tj_ratio_experiment(family, {200, 32, 1});
    c.require(r.ratio <= 4.0, fmt::format("N={} ratio {}", N, r.ratio));
    ratios.push_back(r.ratio);
  }
  bool increasing = true;
  for (std::size_t i = 1; i < ratios.size(); ++i) increasing = increasing && ratios[i] > ratios[i - 1];
  c.require(!increasing, "ratio increases monotonically with N");
  std::string text = "ratios";
  for (double r : ratios) text += fmt::format(" {:.3f}", r);
  c.note(text);
}

std::int64_t oracle_lambda(const pw::BitVector& set, std::size_t k) {
  const auto& A = set.bits();
  const std::size_t N = A.size();
  std::int64_t count = 0;
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t b = 1; b < N; ++b) {
      bool in = true;
      for (std::size_t j = 0; j < k && in; ++j) in = A[(a + j * b) % N] != 0;
      count += in;
    }
  }
  return count;
}

void ac9(Criterion& c) {
  std::mt19937_64 rng(90);
  std::size_t cases = 0;
  for (std::uint64_t N : {5, 7, 11, 13, 17}) {
    for (std::size_t k : {3, 4, 5}) {
      if (k > N) continue;
      const pw::Hypergraph h = pw::ap_hypergraph({N, k});
      c.require(h.num_edges() == N * (N - 1) / 2, fmt::format("|E| N={} k={}", N, k));
      // Pair incidence and degrees counted directly from the edge list.
      std::vector<std::size_t> degree(N, 0);
      std::vector<std::size_t> pair(N * N, 0);
      for (const auto& e : h.edges()) {
        c.require(e.size() == k, "edge of wrong size");
        for (std::size_t i = 0; i < e.size(); ++i) {
          ++degree[e[i]];
          for (std::size_t j = i + 1; j < e.size(); ++j) ++pair[e[i] * N + e[j]];
        }
      }
      for (std::size_t u = 0; u < N; ++u) {
        c.require(degree[u] == k * (N - 1) / 2, fmt::format("degree N={} k={}", N, k));
        for (std::size_t v = u + 1; v < N; ++v) {
          c.require(pair[u * N + v] == k * (k - 1) / 2, fmt::format("pair N={} k={}", N, k));
        }
      }
      const pw::PairIncidence prof = pw::pair_incidence_profile(h);
      c.require(prof.min == k * (k - 1) / 2 && prof.max == k * (k - 1) / 2, "library pair profile");
      for (int t = 0; t < 100; ++t) {
        std::vector<std::uint8_t> bits(N);
        for (auto& b : bits) b = rng() & 1u;
        const pw::BitVector A(bits);
        c.require(2 * pw::eval_pH(h, A) == oracle_lambda(A, k), "2 p_H != Lambda_k");
        c.require(pw::lambda_k(A, k) == oracle_lambda(A, k), "library Lambda_k");
      }
      c.require(pw::two_transitivity_check({N, k}, 100, 91), "two-transitivity");
      ++cases;
    }
  }
  c.note(fmt::format("{} (N,k) cases", cases));
}

void ac10(Criterion& c) {
  const std::uint64_t N = 13;
  const double p = 0.5;
  const double threshold = 2.0 * p * p * p * N * (N - 1) / 2.0;
  // Exact tail by enumerating all 2^13 subsets.
  double exact = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << N); ++mask) {
    std::set<std::vector<std::uint64_t>> aps;
    for (std::uint64_t a = 0; a < N; ++a) {
      for (std::uint64_t b = 1; b < N; ++b) {
        std::vector<std::uint64_t> t{a, (a + b) % N, (a + 2 * b) % N};
        bool in = true;
        for (auto v : t) in = in && ((mask >> v) & 1u);
        if (!in) continue;
        std::sort(t.begin(), t.end());
        aps.insert(t);
      }
    }
    if (static_cast<double>(aps.size()) >= threshold) {
      const int w = __builtin_popcountll(mask);
      exact += std::pow(p, w) * std::pow(1 - p, static_cast<double>(N) - w);
    }
  }
  const pw::UpperTailResult mc = pw::upper_tail_mc({N, p, 101}, {3, 1.0}, 100000);
  c.require(std::abs(mc.threshold - threshold) < 1e-12, "threshold mismatch");
  c.require(std::abs(mc.prob.mean - exact) <= 3 * mc.prob.std_error,
            fmt::format("mc {} vs exact {}", mc.prob.mean, exact));
  c.note(fmt::format("mc {:.5f} (se {:.5f}) vs exact {:.5f}", mc.prob.mean, mc.prob.std_error,
                     exact));
}

// Naive intersectivity: every subset of the minimum dense size must contain
// an (ell+1)-term progression with difference in D.
bool oracle_intersective(std::uint64_t N, std::size_t ell, std::size_t size,
                         std::uint64_t dmask) {
  std::vector<std::uint64_t> ap_masks;
  for (std::uint64_t d = 1; d < N; ++d) {
    if (!((dmask >> d) & 1u)) continue;
    for (std::uint64_t x = 0; x < N; ++x) {
      std::uint64_t m = 0;
      for (std::size_t j = 0; j <= ell; ++j) m |= std::uint64_t{1} << ((x + j * d) % N);
      if (static_cast<std::size_t>(__builtin_popcountll(m)) == ell + 1) ap_masks.push_back(m);
    }
  }
  for (std::uint64_t set = 0; set < (std::uint64_t{1} << N); ++set) {
    if (static_cast<std::size_t>(__builtin_popcountll(set)) != size) continue;
    const bool hit = std::any_of(ap_masks.begin(), ap_masks.end(),
                                 [&](std::uint64_t m) { return (set & m) == m; });
    if (!hit) return false;
  }
  return true;
}

void ac11(Criterion& c) {
  const std::vector<std::uint64_t> one{1};
  const auto r = pw::intersectivity_check(5, 2, 0.6, one);
  c.require(!r.intersective() && r.exact && r.witness.has_value(), "N=5 D={1} should fail");
  if (r.witness) {
    const auto& w = *r.witness;
    c.require(w.weight() >= 3, "witness too small");
    bool has_ap = false;
    for (std::uint64_t x = 0; x < 5; ++x) {
      has_ap = has_ap || (w.bits()[x] && w.bits()[(x + 1) % 5] && w.bits()[(x + 2) % 5]);
    }
    c.require(!has_ap, "witness contains a progression");
  }
  for (std::uint64_t N : {5, 7, 11}) {
    std::vector<std::uint64_t> all;
    for (std::uint64_t d = 1; d < N; ++d) all.push_back(d);
    c.require(pw::intersectivity_check(N, 1, 0.6, all).intersective(),
              fmt::format("full D not intersective N={}", N));
  }

  // Random Bernoulli difference sets in Z/11Z against the weighted oracle.
  const std::uint64_t N = 11;
  const std::size_t ell = 2;
  const double alpha = 0.5, p = 0.3;
  const std::size_t size = pw::min_dense_size(N, alpha);
  double exact = 0.0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (N - 1)); ++bits) {
    const std::uint64_t dmask = bits << 1;
    if (!oracle_intersective(N, ell, size, dmask)) continue;
    const int w = __builtin_popcountll(bits);
    exact += std::pow(p, w) * std::pow(1 - p, static_cast<double>(N - 1) - w);
  }
  const pw::McEstimate mc = pw::random_intersectivity_experiment(
      N, ell, alpha, {pw::DifferenceModel::Kind::kBernoulli, p, 0}, {10000, 111, 1});
  c.require(std::abs(mc.mean - exact) <= 3 * mc.std_error,
            fmt::format("random model {} vs exact {}", mc.mean, exact));
  c.require(exact > 0.0 && exact < 1.0, "degenerate oracle probability");
  c.note(fmt::format("N=11 ell=2 p=0.3: mc {:.4f} (se {:.4f}) vs exact {:.4f}", mc.mean,
                     mc.std_error, exact));
}

void ac12(Criterion& c) {
  std::mt19937_64 rng(120);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 10;
    const std::size_t d = 1 + rng() % 4;
    const pw::Hypergraph h = pw::testing::random_hypergraph(rng, n, 12, 1, std::min(d, n));
    const pw::Hypergraph g = pw::homogenize(h, d).hypergraph;
    c.require(g.is_uniform(d), "not uniform");
    c.require(pw::degree_profile(g).max_degree == pw::degree_profile(h).max_degree,
              "max degree changed");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<std::int64_t> x(g.num_vertices(), 1);
      for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1u;
      const std::vector<std::int64_t> head(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
      if (pw::testing::brute_pH(g, x) != pw::testing::brute_pH(h, head)) {
        c.require(false, fmt::format("value mismatch trial {}", trial));
        break;
      }
    }
  }
  c.note("100 hypergraphs, exhaustive 0/1 points");
}

void ac13(Criterion& c) {
  std::mt19937_64 rng(130);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  double worst = 0.0;
  int cases = 0;
  while (cases < 100) {
    const std::size_t n = 3 + rng() % 8;
    const std::size_t d = 2 + rng() % 3;
    if (d > n) continue;
    const pw::Hypergraph h = pw::testing::random_uniform_hypergraph(rng, n, d, 1 + rng() % 10);
    const auto derived = pw::gradient_hypergraphs(h);
    std::vector<double> x(n);
    for (auto& v : x) v = coord(rng);
    const auto grad = pw::gradient_pH(h, std::span<const double>(x));
    for (std::size_t i = 0; i < n; ++i) {
      auto up = x, down = x;
      const double step = 1e-5;
      up[i] += step;
      down[i] -= step;
      const double fd =
          (pw::testing::brute_pH(h, up) - pw::testing::brute_pH(h, down)) / (2 * step);
      const double value = pw::testing::brute_pH(derived[i], x);
      worst = std::max({worst, std::abs(value - fd), std::abs(grad[i] - fd)});
    }
    ++cases;
  }
  c.require(worst <= 1e-6, fmt::format("max deviation {}", worst));
  c.note(fmt::format("100 cases, max |derived - fd| = {:.2e}", worst));
}

struct CliOutput {
  int code = 0;
  std::string out;
  std::string err;
};

CliOutput cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = pw::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

void ac14(Criterion& c) {
  const auto dir = std::filesystem::temp_directory_path() / "polywidth_acceptance";
  std::filesystem::create_directories(dir);
  const auto graph_path = (dir / "graph.txt").string();
  {
    std::ofstream f(graph_path);
    f << "4 2\n0 1\n2 3\n";
  }
  const std::vector<std::vector<std::string>> commands{
      {"gw-estimate", "--n", "6,8", "--k", "3", "--d", "2", "--t", "1", "--samples", "3000"},
      {"gw-estimate", "--n", "8", "--map", "identity", "--samples", "3000"},
      {"matrix-verify", "--hypergraph", graph_path, "--m", "2", "--r", "1"},
      {"birthday", "--r", "1", "--n", "100", "--samples", "3000"},
      {"poisson-check", "--r", "1", "--n", "100", "--samples", "3000"},
      {"tj-ratio", "--N", "16,32", "--samples", "40"},
      {"ap-count", "--N", "13", "--k", "3"},
      {"ap-structure", "--N", "11", "--k", "4", "--trials", "20"},
      {"upper-tail", "--N", "13", "--k", "3", "--p", "0.5", "--delta", "1", "--samples", "3000"},
      {"intersective", "--N", "5", "--ell", "2", "--alpha", "0.6", "--D", "1"},
      {"intersective", "--N", "9", "--ell", "1", "--alpha", "0.5", "--p", "0.2", "--trials", "800"},
      {"bound-eval", "--n", "16,64", "--k", "4", "--d", "3", "--t", "2"},
  };
  std::size_t runs = 0;
  for (const auto& base : commands) {
    for (const std::string format : {"csv", "json"}) {
      auto args = base;
      args.insert(args.end(), {"--seed", "5", "--format", format});
      auto one = args, eight = args;
      one.insert(one.end(), {"--threads", "1"});
      eight.insert(eight.end(), {"--threads", "8"});
      const CliOutput a = cli(one), b = cli(one), d = cli(eight);
      c.require(a.code == 0, fmt::format("{} exit {}: {}", base[0], a.code, a.err));
      c.require(!a.out.empty(), base[0] + " produced no output");
      c.require(a.out == b.out && a.err == b.err, base[0] + " rerun differs");
      c.require(a.out == d.out && a.err == d.err, base[0] + " threads 1 vs 8 differ");
      runs += 3;
    }
  }
  // A config file gives the same bytes as the equivalent flags.
  const auto config_path = (dir / "upper.cfg").string();
  {
    std::ofstream f(config_path);
    f << "command=upper-tail\nN=13\nk=3\np=0.5\ndelta=1\nsamples=3000\nseed=5\n";
  }
  const CliOutput from_file = cli({"--config", config_path, "--threads", "8"});
  const CliOutput from_flags = cli({"upper-tail", "--N", "13", "--k", "3", "--p", "0.5", "--delta",
                                    "1", "--samples", "3000", "--seed", "5"});
  c.require(from_file.code == 0 && from_file.out == from_flags.out, "config file output differs");
  std::filesystem::remove_all(dir);
  c.note(fmt::format("{} commands x 2 formats, {} runs", commands.size(), runs + 2));
}

}  // namespace

int main() {
  run("AC1", "lift identity", ac1);
  run("AC2", "equal cover counts", ac2);
  run("AC3", "sparsity and norm bound", ac3);
  run("AC4", "birthday goodness probability", ac4);
  run("AC5", "Markov step", ac5);
  run("AC6", "Poisson sum and domination", ac6);
  run("AC7", "Gaussian width oracles", ac7);
  run("AC8", "Gaussian matrix series ratio", ac8);
  run("AC9", "progression hypergraph structure", ac9);
  run("AC10", "upper tail vs exact enumeration", ac10);
  run("AC11", "intersectivity", ac11);
  run("AC12", "homogenization", ac12);
  run("AC13", "gradient hypergraphs", ac13);
  run("AC14", "CLI determinism", ac14);
  std::cout << (g_failed == 0 ? "ALL PASS" : fmt::format("{} FAILED", g_failed)) << std::endl;
  return g_failed == 0 ? 0 : 1;
}
