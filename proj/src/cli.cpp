// Copyright 2026 The polywidth Authors
// SPDX-License-Identifier: Apache-2.0

#include "polywidth/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "polywidth/apmod.hpp"
#include "polywidth/birthday.hpp"
#include "polywidth/error.hpp"
#include "polywidth/gwidth.hpp"
#include "polywidth/hypergraph.hpp"
#include "polywidth/randsets.hpp"
#include "polywidth/tensorlift.hpp"

namespace polywidth::cli {
namespace {

using Cell = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string>;

struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Nonempty when a check ran to completion and failed; the report is
  /// still emitted.
  std::string failure;
};

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  const std::string text = fmt::format("{:.12g}", value);
  return text == "-0" ? "0" : text;
}

std::string csv_field(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos) return v;
      std::string quoted = "\"";
      for (char c : v) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      return quoted + '"';
    }
  };
  return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json json_field(const Cell& cell) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(std::uint64_t v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      // Same 12 significant digits as the CSV writer.
      return std::stod(fmt::format("{:.12g}", v));
    }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

void write_csv(const Report& report, std::uint64_t seed, std::ostream& os) {
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    os << (i ? "," : "") << report.columns[i];
  }
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << '\n';
  }
  os << "# seed=" << seed << " version=" << kVersion << '\n';
}

void write_json(const Report& report, const std::string& command, std::uint64_t seed,
                std::ostream& os) {
  nlohmann::ordered_json doc;
  doc["command"] = command;
  doc["seed"] = seed;
  doc["version"] = kVersion;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[report.columns[i]] = json_field(row[i]);
    doc["rows"].push_back(std::move(obj));
  }
  os << doc.dump(2) << '\n';
}

std::string join(const std::vector<std::uint64_t>& values, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(values[i]);
  }
  return out;
}

Cell cell(std::size_t v) { return static_cast<std::uint64_t>(v); }

// ---------------------------------------------------------------------------
// Subcommands

struct Common {
  std::string config;
  unsigned threads = 1;
  std::string format = "csv";
  std::string output;
  std::uint64_t seed = 0;
};

struct Context {
  const Common& common;
  std::ostream& err;
};

using Runner = std::function<Report(const Context&)>;

struct Command {
  const char* name;
  const char* summary;
  const char* description;
  std::function<Runner(CLI::App&)> setup;
};

Runner setup_gw_estimate(CLI::App& app) {
  struct Opts {
    std::vector<std::size_t> n;
    std::size_t k = 0, d = 2, t = 1;
    std::string map = "random";
    std::uint64_t samples = 10000;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--n", o->n, "Hypercube dimension; a comma-separated list gives a ladder")
      ->required()
      ->delimiter(',');
  app.add_option("--k", o->k, "Number of output coordinates (random map)");
  app.add_option("--d", o->d, "Degree of each component (random map)")->capture_default_str();
  app.add_option("--t", o->t, "Multiplicity: matchings per component (random map)")
      ->capture_default_str();
  app.add_option("--map", o->map, "random | identity")
      ->check(CLI::IsMember({"random", "identity"}))
      ->capture_default_str();
  app.add_option("--samples", o->samples, "Gaussian samples")->capture_default_str();
  return [o](const Context& ctx) {
    Report report{{"n", "k", "d", "t", "samples", "seed", "gw_mean", "gw_se", "bound", "fitted_C"},
                  {}, {}};
    const McOptions mc{o->samples, ctx.common.seed, ctx.common.threads};
    if (o->samples == 0) throw InvalidArgument("samples", "must be positive");
    for (std::size_t n : o->n) {
      LadderRow row;
      if (o->map == "identity") {
        const PointDomain domain = PointDomain::hypercube_image(identity_map(n));
        row = LadderRow{n, n, 1, 1, gw_estimate(domain, mc), theorem_bound(n, n, 1, 1), 0.0};
        row.fitted_c = row.gw.mean / row.bound;
      } else {
        if (o->k == 0) throw InvalidArgument("k", "must be positive");
        const std::size_t ns[] = {n};
        row = gw_bound_ladder(ns, o->k, o->d, o->t, mc).front();
      }
      report.rows.push_back({cell(row.n), cell(row.k), cell(row.d), cell(row.t),
                             row.gw.samples, row.gw.seed, row.gw.mean, row.gw.std_error,
                             row.bound, row.fitted_c});
    }
    return report;
  };
}

std::string format_rational(const Rational& q) {
  return q.den == 1 ? std::to_string(q.num) : fmt::format("{}/{}", q.num, q.den);
}

Runner setup_matrix_verify(CLI::App& app) {
  struct Opts {
    std::string hypergraph;
    std::optional<std::size_t> n;
    std::size_t m = 0, r = 0;
    std::optional<std::uint64_t> s;
    std::uint64_t budget = kDefaultEnumerationBudget;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--hypergraph", o->hypergraph, "Hypergraph file (first line \"n m\")")
      ->required();
  app.add_option("--n", o->n, "Expected vertex count; must match the file");
  app.add_option("--m", o->m, "Tensor power")->required();
  app.add_option("--r", o->r, "Half the edge size")->required();
  app.add_option("--s", o->s, "Goodness bound (default 200*4^r)");
  app.add_option("--budget", o->budget, "Maximum n^m")->capture_default_str();
  return [o](const Context& ctx) {
    const Hypergraph graph = load_hypergraph(o->hypergraph);
    if (o->n && *o->n != graph.num_vertices()) {
      throw InvalidArgument("n", fmt::format("is {} but the hypergraph has {} vertices", *o->n,
                                             graph.num_vertices()));
    }
    if (o->r == 0) throw InvalidArgument("r", "must be positive");
    LiftParams params{graph.num_vertices(), o->m, o->r, o->s.value_or(default_constants(o->r).s),
                      o->budget, ctx.common.threads};
    const MatrixLemma lemma = build_matrix_lemma(graph, params);
    const LiftVerification check = verify_lift_identity(graph, lemma.matrix, lemma.cover_count,
                                                        params.m, ctx.common.threads);
    const SpectralNormResult norm = spectral_norm(lemma.matrix);
    const std::string cover = format_rational(lemma.cover_count);
    ctx.err << "identity: " << (check.holds ? "OK" : "FAIL") << ", cover_count=" << cover
            << '\n';
    const MatrixLemmaReport& r = lemma.report;
    Report report{{"n", "m", "r", "s", "dim", "edges", "max_degree", "colors", "pair_set_size",
                   "cover_count", "max_pair_row_count", "max_pair_col_count", "max_row_sum",
                   "norm_bound", "spectral_norm", "vectors_checked", "identity"},
                  {}, {}};
    report.rows.push_back({cell(params.n), cell(params.m), cell(params.r), params.s,
                           lemma.matrix.dim(), cell(graph.num_edges()), cell(r.max_degree),
                           cell(r.num_colors), cell(r.pair_set_size), cover,
                           r.max_pair_row_count, r.max_pair_col_count, r.max_row_sum,
                           r.norm_bound, norm.estimate, check.vectors_checked,
                           std::string(check.holds ? "OK" : "FAIL")});
    if (!check.holds) {
      ctx.err << "counterexample lhs=" << check.lhs << " rhs*den=" << check.rhs_times_den
              << '\n';
      report.failure = "lift identity does not hold";
    }
    return report;
  };
}

struct BirthdayOpts {
  std::size_t r = 1;
  std::size_t n = 0;
  std::optional<std::size_t> m;
  std::optional<std::uint64_t> s;
  std::uint64_t samples = 10000;

  BirthdayParams params() const {
    if (r == 0) throw InvalidArgument("r", "must be positive");
    BirthdayParams p = BirthdayParams::with_defaults(r, n);
    if (m) p.m = *m;
    if (s) p.s = *s;
    p.validate();
    return p;
  }
};

void add_birthday_options(CLI::App& app, BirthdayOpts& o, std::uint64_t default_samples) {
  o.samples = default_samples;
  app.add_option("--r", o.r, "Half the block size")->capture_default_str();
  app.add_option("--n", o.n, "Codomain size")->required();
  app.add_option("--m", o.m, "Domain size (default floor(C_r n^(1-1/r)))");
  app.add_option("--s", o.s, "Goodness bound (default 200*4^r)");
  app.add_option("--samples", o.samples, "Monte-Carlo samples")->capture_default_str();
}

Runner setup_birthday(CLI::App& app) {
  auto o = std::make_shared<BirthdayOpts>();
  add_birthday_options(app, *o, 10000);
  return [o](const Context& ctx) {
    const BirthdayParams p = o->params();
    const Hypergraph matching = greedy_maximal_matching(p.n, p.r);
    const BirthdayStats stats =
        birthday_statistics(p, matching, McOptions{o->samples, ctx.common.seed, ctx.common.threads});
    Report report{{"r", "n", "m", "s", "samples", "seed", "p_good", "se", "mean_phi", "se_phi"}, {}, {}};
    report.rows.push_back({cell(p.r), cell(p.n), cell(p.m), p.s, o->samples, ctx.common.seed,
                           stats.p_good.mean, stats.p_good.std_error, stats.mean_phi.mean,
                           stats.mean_phi.std_error});
    return report;
  };
}

Runner setup_poisson_check(CLI::App& app) {
  struct Opts {
    BirthdayOpts b;
    double mu_a = 1.5, mu_b = 2.5;
  };
  auto o = std::make_shared<Opts>();
  add_birthday_options(app, o->b, 100000);
  app.add_option("--mu-a", o->mu_a, "Mean of the first Poisson summand")->capture_default_str();
  app.add_option("--mu-b", o->mu_b, "Mean of the second Poisson summand")->capture_default_str();
  return [o](const Context& ctx) {
    const BirthdayParams p = o->b.params();
    const Hypergraph matching = greedy_maximal_matching(p.n, p.r);
    const McOptions mc{o->b.samples, ctx.common.seed, ctx.common.threads};
    const ChiSquareResult chi2 = poisson_sum_chi_square(o->mu_a, o->mu_b, mc);
    const PoissonDominationReport dom = poisson_domination_check(p, matching, mc);
    Report report{{"check", "lhs", "lhs_se", "rhs", "rhs_se", "statistic", "dof", "p_value",
                   "pass"},
                  {}, {}};
    report.rows.push_back({std::string("poisson_sum"), {}, {}, {}, {}, chi2.statistic,
                           cell(chi2.dof), chi2.p_value, chi2.pass});
    for (const auto& [name, side] : {std::pair{"psi", dom.psi}, std::pair{"chi", dom.chi}}) {
      report.rows.push_back({std::string(name), side.lhs.mean, side.lhs.std_error, side.rhs.mean,
                             side.rhs.std_error, {}, {}, {}, side.holds});
    }
    if (!(chi2.pass && dom.psi.holds && dom.chi.holds)) {
      report.failure = "a Poisson check failed";
    }
    return report;
  };
}

Runner setup_tj_ratio(CLI::App& app) {
  struct Opts {
    std::vector<std::size_t> N{64, 128, 256, 512};
    std::size_t k = 0;
    std::uint64_t samples = 200;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--N", o->N, "Matrix dimensions (comma-separated)")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--k", o->k, "Matrices per sum (default N/4)");
  app.add_option("--samples", o->samples, "Gaussian coefficient draws")->capture_default_str();
  return [o](const Context& ctx) {
    Report report{{"N", "k", "samples", "seed", "lhs", "lhs_se", "rhs", "ratio"}, {}, {}};
    for (std::size_t N : o->N) {
      const std::size_t k = o->k ? o->k : N / 4;
      if (k == 0) throw InvalidArgument("k", "must be positive");
      const auto matrices = random_matching_family(N, k, ctx.common.seed);
      const TjResult r = tj_ratio_experiment(
          matrices, McOptions{o->samples, ctx.common.seed, ctx.common.threads});
      report.rows.push_back({cell(N), cell(k), o->samples, ctx.common.seed, r.lhs.mean,
                             r.lhs.std_error, r.rhs, r.ratio});
    }
    return report;
  };
}

Runner setup_ap_count(CLI::App& app) {
  struct Opts {
    std::uint64_t N = 0;
    std::size_t k = 3;
    bool loose = false;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--N", o->N, "Prime modulus")->required();
  app.add_option("--k", o->k, "Progression length")->capture_default_str();
  app.add_flag("--loose", o->loose, "Count each progression set once, any N");
  return [o](const Context& ctx) {
    const ApParams params{o->N, o->k};
    const Hypergraph h = o->loose ? ap_hypergraph_loose(params) : ap_hypergraph(params);
    const DegreeProfile profile = degree_profile(h);
    ctx.err << "edges=" << h.num_edges() << '\n';
    Report report{{"N", "k", "edges", "max_degree"}, {}, {}};
    report.rows.push_back({o->N, cell(o->k), cell(h.num_edges()), cell(profile.max_degree)});
    return report;
  };
}

Runner setup_ap_structure(CLI::App& app) {
  struct Opts {
    std::uint64_t N = 0;
    std::size_t k = 3;
    std::size_t trials = 100;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--N", o->N, "Prime modulus")->required();
  app.add_option("--k", o->k, "Progression length")->capture_default_str();
  app.add_option("--trials", o->trials, "Random sets and random affine maps checked")
      ->capture_default_str();
  return [o](const Context& ctx) {
    const ApParams params{o->N, o->k};
    const Hypergraph h = ap_hypergraph(params);
    const std::uint64_t N = o->N;
    const std::uint64_t k = o->k;
    const PairIncidence pairs = pair_incidence_profile(h);
    const DegreeProfile profile = degree_profile(h);
    const auto [dmin, dmax] = std::minmax_element(profile.degrees.begin(), profile.degrees.end());
    std::size_t lambda_ok = 0;
    for (std::size_t i = 0; i < o->trials; ++i) {
      CounterStream stream(ctx.common.seed, stream_tag::kSubset, i);
      const BitVector set = sample_subset(N, 0.5, stream);
      lambda_ok += 2 * eval_pH(h, set) == lambda_k(set, o->k);
    }
    const bool transitive = two_transitivity_check(params, o->trials, ctx.common.seed);
    const bool ok = h.num_edges() == N * (N - 1) / 2 && pairs.min == k * (k - 1) / 2 &&
                    pairs.max == k * (k - 1) / 2 && *dmin == k * (N - 1) / 2 &&
                    *dmax == k * (N - 1) / 2 && lambda_ok == o->trials && transitive;
    Report report{{"N", "k", "edges", "pair_min", "pair_max", "degree_min", "degree_max",
                   "lambda_checks", "lambda_ok", "two_transitive", "pass"},
                  {}, {}};
    report.rows.push_back({N, k, cell(h.num_edges()), cell(pairs.min), cell(pairs.max),
                           cell(*dmin), cell(*dmax), cell(o->trials), cell(lambda_ok), transitive,
                           ok});
    if (!ok) report.failure = "progression hypergraph structure check failed";
    return report;
  };
}

Runner setup_upper_tail(CLI::App& app) {
  struct Opts {
    std::uint64_t N = 0;
    std::size_t k = 3;
    double p = 0.5, delta = 1.0;
    std::uint64_t samples = 10000;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--N", o->N, "Modulus")->required();
  app.add_option("--k", o->k, "Progression length")->capture_default_str();
  app.add_option("--p", o->p, "Inclusion probability")->capture_default_str();
  app.add_option("--delta", o->delta, "Relative excess")->capture_default_str();
  app.add_option("--samples", o->samples, "Random sets drawn")->capture_default_str();
  return [o](const Context& ctx) {
    const UpperTailResult r = upper_tail_mc(RandomSetParams{o->N, o->p, ctx.common.seed},
                                            TailQuery{o->k, o->delta}, o->samples,
                                            ctx.common.threads);
    Report report{{"N", "k", "p", "delta", "samples", "seed", "prob", "se_or_bound",
                   "reference_rate"},
                  {}, {}};
    report.rows.push_back({o->N, cell(o->k), o->p, o->delta, o->samples, ctx.common.seed,
                           r.prob.mean, r.zero_hit_bound.value_or(r.prob.std_error),
                           r.reference_rate});
    return report;
  };
}

const char* status_name(IntersectivityResult::Status status) {
  switch (status) {
    case IntersectivityResult::Status::kIntersective: return "intersective";
    case IntersectivityResult::Status::kNotIntersective: return "not_intersective";
    case IntersectivityResult::Status::kNoWitnessFound: return "no_witness_found";
  }
  return "unknown";
}

Runner setup_intersective(CLI::App& app) {
  struct Opts {
    std::uint64_t N = 0;
    std::size_t ell = 1;
    double alpha = 0.5;
    std::vector<std::uint64_t> D;
    std::string model = "bernoulli";
    double p = 0.5;
    std::size_t draws = 1;
    std::uint64_t trials = 10000;
    std::uint64_t anneal_steps = IntersectivityOptions{}.anneal_steps;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--N", o->N, "Modulus")->required();
  app.add_option("--ell", o->ell, "Progressions have ell+1 terms")->capture_default_str();
  app.add_option("--alpha", o->alpha, "Density threshold")->capture_default_str();
  app.add_option("--D", o->D, "Explicit difference set (comma-separated); omit for the random model")
      ->delimiter(',');
  app.add_option("--model", o->model, "Random difference model: bernoulli | draws")
      ->check(CLI::IsMember({"bernoulli", "draws"}))
      ->capture_default_str();
  app.add_option("--p", o->p, "Inclusion probability (bernoulli)")->capture_default_str();
  app.add_option("--draws", o->draws, "Uniform draws (draws)")->capture_default_str();
  app.add_option("--trials", o->trials, "Random difference sets")->capture_default_str();
  app.add_option("--anneal-steps", o->anneal_steps, "Search budget above N=24")
      ->capture_default_str();
  return [o](const Context& ctx) {
    if (!o->D.empty()) {
      const IntersectivityResult r = intersectivity_check(
          o->N, o->ell, o->alpha, o->D,
          IntersectivityOptions{ctx.common.threads, ctx.common.seed, o->anneal_steps});
      std::vector<std::uint64_t> witness;
      if (r.witness) {
        for (std::size_t i = 0; i < r.witness->size(); ++i) {
          if ((*r.witness)[i]) witness.push_back(i);
        }
      }
      Report report{{"N", "ell", "alpha", "D", "status", "exact", "witness"}, {}, {}};
      report.rows.push_back({o->N, cell(o->ell), o->alpha, join(o->D, " "),
                             std::string(status_name(r.status)), r.exact,
                             r.witness ? Cell(join(witness, " ")) : Cell{}});
      return report;
    }
    DifferenceModel model;
    Cell param;
    if (o->model == "bernoulli") {
      model = DifferenceModel{DifferenceModel::Kind::kBernoulli, o->p, 0};
      param = o->p;
    } else {
      model = DifferenceModel{DifferenceModel::Kind::kDraws, 0.0, o->draws};
      param = cell(o->draws);
    }
    const McEstimate r = random_intersectivity_experiment(
        o->N, o->ell, o->alpha, model, McOptions{o->trials, ctx.common.seed, ctx.common.threads});
    Report report{{"N", "ell", "alpha", "model", "param", "trials", "prob"}, {}, {}};
    report.rows.push_back({o->N, cell(o->ell), o->alpha, o->model, param, o->trials, r.mean});
    return report;
  };
}

Runner setup_bound_eval(CLI::App& app) {
  struct Opts {
    std::vector<std::size_t> n;
    std::size_t k = 1, d = 2, t = 1;
  };
  auto o = std::make_shared<Opts>();
  app.add_option("--n", o->n, "Hypercube dimensions (comma-separated)")
      ->required()
      ->delimiter(',');
  app.add_option("--k", o->k, "Output coordinates")->capture_default_str();
  app.add_option("--d", o->d, "Degree")->capture_default_str();
  app.add_option("--t", o->t, "Multiplicity")->capture_default_str();
  return [o](const Context&) {
    Report report{{"n", "k", "d", "t", "bound"}, {}, {}};
    for (std::size_t n : o->n) {
      report.rows.push_back(
          {cell(n), cell(o->k), cell(o->d), cell(o->t), theorem_bound(n, o->k, o->d, o->t)});
    }
    return report;
  };
}

const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {"gw-estimate", "Monte-Carlo Gaussian width of a polynomial image of the hypercube",
       "Estimates gw(P({0,1}^n)) = E sup_x <P(x), g> for a random map P: {0,1}^n -> R^k whose "
       "components are degree-d hypergraph polynomials of multiplicity t (or the identity map), "
       "and reports the ratio to n t sqrt(k n^(1-1/ceil(d/2)) log n). Operation: gw_bound_ladder.",
       setup_gw_estimate},
      {"matrix-verify", "Build the tensor-lift matrix of a 2r-uniform hypergraph and verify it",
       "Builds the symmetric integer matrix A on [n]^m from an edge coloring of H, then checks "
       "<A x^(m), x^(m)> = 2 c p_H(x) for every sign vector x. Prints \"identity: OK, "
       "cover_count=c\" on stderr. Exit 4 if the identity fails. Operations: "
       "build_matrix_lemma, verify_lift_identity.",
       setup_matrix_verify},
      {"birthday", "Estimate the probability that a random map is s-good",
       "Samples uniform maps h: [m] -> [n] and reports Pr[1 <= phi(h) <= s] and E[phi(h)], "
       "with phi summed over a maximal matching of 2r-sets. Operation: birthday_statistics.",
       setup_birthday},
      {"poisson-check", "Poisson thinning and domination checks",
       "Runs a chi-square test that Poisson(mu_a) + Poisson(mu_b) is Poisson(mu_a + mu_b), and "
       "compares E[Phi(X)] against 2 E[Phi(Y)] for the multinomial histogram X and the "
       "Poissonized histogram Y. Exit 4 on failure. Operations: poisson_sum_chi_square, "
       "poisson_domination_check.",
       setup_poisson_check},
      {"tj-ratio", "Gaussian series of random matching matrices",
       "For each N, draws k random perfect-matching matrices and reports "
       "E||sum g_i A_i|| / (sqrt(log N) sqrt(sum ||A_i||^2)). Operation: tj_ratio_experiment.",
       setup_tj_ratio},
      {"ap-count", "Count the k-term progressions of Z/NZ",
       "Builds the hypergraph of proper k-term progressions {a, a+b, ..., a+(k-1)b} mod a prime "
       "N and prints \"edges=|E|\" on stderr. Operation: ap_hypergraph.",
       setup_ap_count},
      {"ap-structure", "Exact structural checks on the progression hypergraph",
       "Checks the edge count N(N-1)/2, constant pair incidence k(k-1)/2, constant degree "
       "k(N-1)/2, 2 p_H(1_A) = Lambda_k(1_A) on random A, and transitivity of the affine group "
       "on ordered pairs. Exit 4 on failure. Operations: pair_incidence_profile, lambda_k, "
       "two_transitivity_check.",
       setup_ap_structure},
      {"upper-tail", "Upper tail of the progression count in a random set",
       "Estimates Pr[X_k >= (1+delta) E X_k] for the p-random subset of Z/NZ. With no hits the "
       "se_or_bound column holds the rule-of-three bound 3/samples. Operation: upper_tail_mc.",
       setup_upper_tail},
      {"intersective", "Intersectivity of a difference set",
       "With --D, decides whether every set of density alpha contains an (ell+1)-term "
       "progression with difference in D and prints a witness when it does not. Without --D, "
       "estimates the probability that a random difference set is intersective. Operations: "
       "intersectivity_check, random_intersectivity_experiment.",
       setup_intersective},
      {"bound-eval", "Evaluate the Gaussian width bound",
       "Prints n t sqrt(k n^(1-1/ceil(d/2)) log n). Operation: theorem_bound.",
       setup_bound_eval},
  };
  return table;
}

std::string usage() {
  std::string text = fmt::format(
      "polywidth {}\nUsage: polywidth <command> [--options]\n\nCommands:\n", kVersion);
  for (const auto& c : commands()) text += fmt::format("  {:<15}{}\n", c.name, c.summary);
  text +=
      "\nCommon options: --config FILE, --seed N, --threads N, --format csv|json, --output FILE"
      "\nRun 'polywidth <command> --help' for command options.\n";
  return text;
}

// ---------------------------------------------------------------------------
// Config files

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::pair<std::string, std::string>> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config", "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::vector<std::pair<std::string, std::string>> entries;
  if (trim(text).starts_with("{")) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("config", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InvalidArgument("config", "JSON config must be an object");
    auto scalar = [](const nlohmann::json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      return v.dump();
    };
    for (const auto& [key, value] : doc.items()) {
      if (value.is_array()) {
        std::string joined;
        for (std::size_t i = 0; i < value.size(); ++i) joined += (i ? "," : "") + scalar(value[i]);
        entries.emplace_back(key, joined);
      } else {
        entries.emplace_back(key, scalar(value));
      }
    }
    return entries;
  }
  std::istringstream lines(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(lines, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config", fmt::format("line {}: expected key=value", number));
    }
    std::string key = trim(line.substr(0, eq));
    while (key.starts_with("-")) key.erase(0, 1);
    entries.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return entries;
}

std::optional<std::string> find_flag_value(const std::vector<std::string>& args,
                                           const std::string& flag) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == flag && i + 1 < args.size()) return args[i + 1];
    if (args[i].starts_with(flag + "=")) return args[i].substr(flag.size() + 1);
  }
  return std::nullopt;
}

bool mentions(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.starts_with(flag + "=");
  });
}

bool truthy(const std::string& value) {
  return value == "true" || value == "1" || value == "yes" || value == "on";
}

int execute(const std::vector<std::string>& input, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = input;
  std::vector<std::pair<std::string, std::string>> file_entries;
  if (auto path = find_flag_value(args, "--config")) file_entries = load_config(*path);

  std::string name;
  if (!args.empty() && !args.front().starts_with("-")) {
    name = args.front();
    args.erase(args.begin());
  } else {
    for (const auto& [key, value] : file_entries) {
      if (key == "command") name = value;
    }
  }
  if (name == "help" || (name.empty() && mentions(args, "--help"))) {
    out << usage();
    return kOk;
  }
  if (name.empty()) {
    err << "error: invalid command: none given\n" << usage();
    return kInvalidConfig;
  }
  const auto& table = commands();
  const auto it = std::find_if(table.begin(), table.end(),
                               [&](const Command& c) { return name == c.name; });
  if (it == table.end()) throw InvalidArgument("command", "unknown command '" + name + "'");

  CLI::App app(it->description, fmt::format("polywidth {}", it->name));
  app.get_formatter()->column_width(28);
  Common common;
  app.add_option("--config", common.config, "key=value or JSON file supplying any option");
  app.add_option("--seed", common.seed, "Root seed of every random stream")->capture_default_str();
  app.add_option("--threads", common.threads, "Worker threads; output does not depend on it")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--format", common.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--output", common.output, "Write the report here instead of stdout");
  const Runner runner = it->setup(app);

  // File entries fill in options absent from the command line.
  for (const auto& [key, value] : file_entries) {
    if (key == "command" || key == "config") continue;
    const std::string flag = "--" + key;
    const CLI::Option* option = app.get_option_no_throw(flag);
    if (option == nullptr) throw InvalidArgument(key, "unknown option in config file");
    if (mentions(args, flag)) continue;
    if (option->get_expected_min() == 0) {
      if (truthy(value)) args.push_back(flag);
    } else {
      args.push_back(flag);
      args.push_back(value);
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  }

  const Report report = runner(Context{common, err});
  std::ostringstream text;
  if (common.format == "json") {
    write_json(report, it->name, common.seed, text);
  } else {
    write_csv(report, common.seed, text);
  }
  if (common.output.empty()) {
    out << text.str();
  } else {
    std::ofstream file(common.output, std::ios::binary);
    if (!file) throw InvalidArgument("output", "cannot open " + common.output);
    file << text.str();
  }
  if (!report.failure.empty()) {
    err << "verification failed: " << report.failure << '\n';
    return kVerificationFailed;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return execute(args, out, err);
  } catch (const InvalidArgument& e) {
    err << "error: invalid " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const BudgetExceeded& e) {
    err << "error: budget exceeded: " << e.what() << '\n';
    return kBudgetExceeded;
  } catch (const std::overflow_error& e) {
    err << "error: budget exceeded: " << e.what() << '\n';
    return kBudgetExceeded;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace polywidth::cli
