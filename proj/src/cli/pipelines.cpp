#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "envmm/cli.hpp"
#include "envmm/cost_minimizer.hpp"
#include "envmm/elliptic.hpp"
#include "envmm/envelope.hpp"
#include "envmm/errors.hpp"
#include "envmm/io.hpp"
#include "envmm/kernels.hpp"
#include "envmm/stationary.hpp"

namespace envmm::cli {

using nlohmann::json;

namespace {

// Independent random streams per config block.
enum class Stream : std::uint64_t { source = 1, candidates, representation, baseline, operators, sampling, oracle };

std::mt19937_64 stream(const ExperimentConfig& cfg, Stream s, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint64_t>(*cfg.seed), static_cast<std::uint64_t>(s), index};
  return std::mt19937_64(seq);
}

Matrix gaussian(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = normal(rng);
  }
  return m;
}

Matrix matrix_from(const json& rows) {
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c].get<double>();
  }
  return m;
}

std::vector<double> doubles_from(const json& arr) {
  std::vector<double> out;
  for (const auto& x : arr) out.push_back(x.get<double>());
  return out;
}

std::string resolve(const ExperimentConfig& cfg, const std::string& path) {
  const std::filesystem::path p(path);
  return (p.is_absolute() ? p : cfg.base_dir / p).string();
}

SourceEnsemble ensemble_from(const ExperimentConfig& cfg, const json& e, Stream s, std::uint64_t index = 0) {
  if (e.contains("csv")) return io::load_ensemble(resolve(cfg, e["csv"].get<std::string>()));
  if (e.contains("random")) {
    const json& r = e["random"];
    const int m = r["m"].get<int>(), d = r["d"].get<int>(), p = r["p"].get<int>();
    auto rng = stream(cfg, s, index);
    std::uniform_real_distribution<double> unif(0.5, 1.5);
    std::vector<double> w(m);
    for (auto& x : w) x = unif(rng);
    return SourceEnsemble(MeasureSpace(std::move(w)), d, p, gaussian(rng, m, d * p));
  }
  return SourceEnsemble(MeasureSpace(doubles_from(e["weights"])), e["d"].get<int>(), e["p"].get<int>(),
                        matrix_from(e["values"]));
}

EllipticConfig elliptic_from(const json& e) {
  EllipticConfig cfg;
  cfg.n_x = e["n_x"].get<int>();
  cfg.bump_width = e["bump_width"].get<double>();
  cfg.time_basis = e["time_basis"].get<int>();
  cfg.bump_centers = doubles_from(e["bump_centers"]);
  cfg.alpha = doubles_from(e["alpha"]);
  if (e.contains("potential")) cfg.potential = e["potential"].get<double>();
  if (e.contains("observable")) cfg.observable = doubles_from(e["observable"]);
  if (e.contains("phi_scales")) cfg.phi_scales = doubles_from(e["phi_scales"]);
  return cfg;
}

RepresentationOperator representation_from(const ExperimentConfig& cfg, const json& r, int d, int p) {
  if (r.contains("elliptic")) return build_elliptic_representation(elliptic_from(r["elliptic"])).op;
  if (r.contains("random")) {
    auto rng = stream(cfg, Stream::representation);
    return RepresentationOperator(d, p, gaussian(rng, r["random"]["p_out"].get<int>(), d * p),
                                  gaussian(rng, r["random"]["q"].get<int>(), d * p));
  }
  const double j_norm = r.contains("j_norm") ? r["j_norm"].get<double>() : 1.0;
  return RepresentationOperator(d, p, matrix_from(r["S1"]), matrix_from(r["S2"]), j_norm);
}

BaselineSpec baseline_from(const ExperimentConfig& cfg, int d, int p) {
  const json& doc = cfg.body;
  if (!doc.contains("baseline")) return BaselineSpec::zero(d, p);
  const json& b = doc["baseline"];
  if (b.contains("sigma_xi")) return BaselineSpec(d, p, matrix_from(b["sigma_xi"]));
  if (b.contains("random_rank")) {
    auto rng = stream(cfg, Stream::baseline);
    const Matrix g = gaussian(rng, d * p, b["random_rank"].get<int>(), 0.5);
    return BaselineSpec(d, p, g * g.transpose());
  }
  return BaselineSpec::zero(d, p);
}

std::vector<HSOperator> operators_from(const ExperimentConfig& cfg, const RepresentationOperator& s) {
  const json& ops = cfg.body["operators"];
  std::vector<HSOperator> out;
  if (ops.is_object()) {
    auto rng = stream(cfg, Stream::operators);
    for (int i = 0; i < ops["random"].get<int>(); ++i) out.emplace_back(gaussian(rng, s.p_out(), s.q(), 0.5));
    return out;
  }
  for (const auto& m : ops) out.emplace_back(matrix_from(m));
  return out;
}

CovarianceSequence sequence_from(const ExperimentConfig& cfg, const json& s) {
  if (s.contains("csv")) return io::load_sequence(resolve(cfg, s["csv"].get<std::string>()));
  std::vector<Matrix> lags;
  for (const auto& m : s["lags"]) lags.push_back(matrix_from(m));
  const int d = static_cast<int>(lags[0].rows());
  return CovarianceSequence(d, std::move(lags));
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_number(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

double rank_tol_of(const json& doc) {
  if (doc.contains("solver") && doc["solver"].contains("rank_tol")) return doc["solver"]["rank_tol"].get<double>();
  if (doc.contains("rank_tol")) return doc["rank_tol"].get<double>();
  return kDefaultRankTol;
}

json minimizer_json(const MinimizerReport& r) {
  return {{"residual_norm", r.residual_norm},
          {"coercivity_margin", r.coercivity_margin},
          {"kernel_dim", r.kernel_dim},
          {"unique", r.unique},
          {"norm_bound", r.norm_bound}};
}

// Applies the configured solver; fills report fields and returns the solution if any.
std::optional<Minimizer> solve_into(const json& doc, const NormalEquationSystem& sys, json& report) {
  const json solver = doc.contains("solver") ? doc["solver"] : json::object();
  const std::string method = solver.contains("method") ? solver["method"].get<std::string>() : "pseudoinverse";
  report["method"] = method;
  if (method == "coercive") {
    try {
      Minimizer m = solve_coercive(sys, solver["c_min"].get<double>());
      report["no_minimizer"] = false;
      report["minimizer"] = minimizer_json(m.report);
      return m;
    } catch (const NotCoercive& e) {
      report["no_minimizer"] = false;
      report["not_coercive"] = true;
      report["message"] = e.what();
      return std::nullopt;
    }
  }
  const auto outcome = solve_pseudoinverse(sys, rank_tol_of(doc));
  if (const auto* none = std::get_if<NoMinimizer>(&outcome)) {
    report["no_minimizer"] = true;
    report["range_violation"] = none->range_violation;
    report["range_tolerance"] = none->tolerance;
    return std::nullopt;
  }
  const Minimizer& m = std::get<Minimizer>(outcome);
  report["no_minimizer"] = false;
  report["minimizer"] = minimizer_json(m.report);
  return m;
}

std::string eigen_series(const Matrix& M) {
  const GramFactorization f(M);
  std::ostringstream ss;
  ss << "eigen_index,eigenvalue\n";
  for (Eigen::Index i = 0; i < f.eigenvalues().size(); ++i) ss << i << ',' << csv_number(f.eigenvalues()(i)) << '\n';
  return ss.str();
}

RunResult run_envelope_check(const ExperimentConfig& cfg) {
  const json& doc = cfg.body;
  const SourceEnsemble source = ensemble_from(cfg, doc["source"], Stream::source);
  RunResult res;
  json cands = json::array();
  std::ostringstream series;
  series << "candidate,lambda_min,member\n";
  bool all = true;
  const json& list = doc["candidates"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const SourceEnsemble cand = list[i].contains("scale")
                                    ? source.scaled(list[i]["scale"].get<double>())
                                    : ensemble_from(cfg, list[i], Stream::candidates, i);
    const Domination dom = is_member(cand, source, cfg.tol);
    all = all && dom.dominates;
    cands.push_back({{"index", i}, {"member", dom.dominates}, {"lambda_min_margin", dom.lambda_min}});
    series << i << ',' << csv_number(dom.lambda_min) << ',' << (dom.dominates ? 1 : 0) << '\n';
  }
  res.report = {{"kind", "envelope_check"}, {"tol", cfg.tol}, {"candidates", cands}, {"all_members", all}};
  res.series_csv = series.str();
  res.exit_code = all ? kExitOk : kExitDomain;
  return res;
}

struct Realized {
  SourceEnsemble source;
  std::optional<SourceEnsemble> xi;
};

Realized realize(const ExperimentConfig& cfg, const SourceEnsemble& a, const BaselineSpec& spec) {
  if (spec.sigma().isZero(0.0)) return {a, std::nullopt};
  FittedBaseline fit = fit_baseline(a, spec, *cfg.seed);
  return {std::move(fit.expanded_source), std::move(fit.xi.values)};
}

RunResult run_minimize(const ExperimentConfig& cfg) {
  const json& doc = cfg.body;
  const SourceEnsemble a = ensemble_from(cfg, doc["source"], Stream::source);
  const RepresentationOperator s = representation_from(cfg, doc["representation"], a.d(), a.p());
  const BaselineSpec spec = baseline_from(cfg, a.d(), a.p());
  const Realized r = realize(cfg, a, spec);
  const ObservedEnsemble obs = apply(s, r.source, r.xi);
  const NormalEquationSystem sys = assemble_normal_equations(obs);

  RunResult res;
  res.report = {{"kind", "minimize"}, {"c_A", sys.c_A}, {"representation_norm", s.norm()}};
  const auto m = solve_into(doc, sys, res.report);
  if (m) {
    const CostDecomposition dec = cost_decomposed(a, spec, s, m->op);
    res.report["cost"] = cost(obs, m->op);
    res.report["cost_decomposed"] = {{"h_A", dec.h_A}, {"r_xi", dec.r_xi}, {"total", dec.total}};
    res.report["hs_norm"] = m->op.hs_norm();
    res.report["operator"] = matrix_json(m->op.lambda());
  }
  res.series_csv = eigen_series(sys.M);
  res.exit_code = m ? kExitOk : kExitDomain;
  return res;
}

RunResult run_verify_extremal(const ExperimentConfig& cfg) {
  const json& doc = cfg.body;
  const SourceEnsemble a = ensemble_from(cfg, doc["source"], Stream::source);
  const RepresentationOperator s = representation_from(cfg, doc["representation"], a.d(), a.p());
  const BaselineSpec spec = baseline_from(cfg, a.d(), a.p());
  const auto ts = operators_from(cfg, s);
  auto rng = stream(cfg, Stream::sampling);
  const ExtremalCheck check = verify_extremal(a, spec, s, ts, rng(), doc["n_samples"].get<int>(), cfg.tol);

  json reports = json::array();
  std::ostringstream series;
  series << "operator,sample,cost,margin\n";
  double max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < check.reports.size(); ++t) {
    const EnvelopeReport& rep = check.reports[t];
    json samples = json::array();
    for (const auto& c : rep.cost_samples) {
      samples.push_back({{"sample", c.sample}, {"cost", c.cost}, {"margin", c.margin}});
      series << t << ',' << c.sample << ',' << csv_number(c.cost) << ',' << csv_number(c.margin) << '\n';
    }
    reports.push_back({{"member", rep.member},
                       {"lambda_min_margin", rep.lambda_min_margin},
                       {"cost_reference", rep.cost_reference},
                       {"cost_samples", samples},
                       {"max_violation", rep.max_violation}});
    max_violation = std::max(max_violation, rep.max_violation);
  }
  RunResult res;
  res.report = {{"kind", "verify_extremal"}, {"tol", check.tol},     {"holds", check.holds},
                {"max_violation", max_violation}, {"reports", reports}};
  res.series_csv = series.str();
  res.exit_code = check.holds ? kExitOk : kExitDomain;
  return res;
}

RunResult run_wss_envelope(const ExperimentConfig& cfg) {
  const json& doc = cfg.body;
  const int grid = doc["grid"].get<int>();
  const SpectralDensity sa = spectral_density(sequence_from(cfg, doc["reference"]), grid);
  const SpectralDensity sap = spectral_density(sequence_from(cfg, doc["candidate"]), grid);
  const WssEnvelopeResult r = wss_envelope_test(sa, sap, cfg.tol);
  RunResult res;
  res.report = {{"kind", "wss_envelope"},         {"tol", cfg.tol},
                {"passes", r.passes},             {"worst_index", r.worst_index},
                {"worst_frequency", r.worst_frequency}, {"lambda_min", r.lambda_min}};
  std::ostringstream series;
  series << "freq_index,omega,lambda_min\n";
  for (int i = 0; i < grid; ++i) {
    series << i << ',' << csv_number(grid_frequency(i, grid)) << ',' << csv_number(r.lambda_min_per_frequency[i]) << '\n';
  }
  res.series_csv = series.str();
  res.exit_code = r.passes ? kExitOk : kExitDomain;
  return res;
}

RunResult run_wss_filter(const ExperimentConfig& cfg) {
  const json& doc = cfg.body;
  const int n = doc["grid"].get<int>();
  const CovarianceSequence seq = sequence_from(cfg, doc["source"]);
  const LTIModel model =
      LTIModel::from_impulse_responses(doubles_from(doc["model"]["h"]), doubles_from(doc["model"]["phi"]), n);
  auto rng = stream(cfg, Stream::oracle);
  const double rank_tol = rank_tol_of(doc);
  const OracleReport o = circulant_oracle(seq, model, n, rng(), rank_tol);
  const SpectralBlocks blocks = lti_blocks(spectral_density(seq, n), model);

  const bool all_flagged = o.flagged_count == n;
  RunResult res;
  res.report = {{"kind", "wss_filter"},
                {"n", o.n},
                {"max_gap", o.max_gap},
                {"flagged_count", o.flagged_count},
                {"all_flagged", all_flagged},
                {"no_minimizer", o.no_minimizer},
                {"kernel_dim", o.kernel_dim},
                {"unique", o.unique},
                {"residual_norm", o.residual_norm},
                {"offdiag_norm", o.offdiag_norm},
                {"embedding_min_eigenvalue", o.embedding_min_eigenvalue},
                {"spectral_energy", o.spectral_energy},
                {"time_energy", o.time_energy},
                {"parseval_rel_error", o.parseval_rel_error},
                {"optimal_cost", spectral_cost(blocks, o.tau)}};
  std::ostringstream series;
  series << "freq_index,omega,tau_re,tau_im,symbol_re,symbol_im,flagged,Syy,Sxx\n";
  for (int r = 0; r < n; ++r) {
    series << r << ',' << csv_number(grid_frequency(r, n)) << ',' << csv_number(o.tau(r).real()) << ','
           << csv_number(o.tau(r).imag()) << ',' << csv_number(o.symbol(r).real()) << ','
           << csv_number(o.symbol(r).imag()) << ',' << (o.flagged[r] ? 1 : 0) << ','
           << csv_number(blocks.Syy(r).real()) << ',' << csv_number(blocks.Sxx(r).real()) << '\n';
  }
  res.report["status"] = o.no_minimizer ? "no_minimizer" : (all_flagged ? "degenerate_auxiliary" : "ok");
  res.series_csv = series.str();
  // No informative frequency means the auxiliary channel carries nothing to filter.
  res.exit_code = (o.no_minimizer || all_flagged) ? kExitDomain : kExitOk;
  return res;
}

RunResult run_elliptic_demo(const ExperimentConfig& cfg) {
  const json& doc = cfg.body;
  const EllipticConfig ecfg = elliptic_from(doc["elliptic"]);
  const EllipticRepresentation built = build_elliptic_representation(ecfg);
  const RepresentationOperator& s = built.op;
  const SourceEnsemble a = ensemble_from(cfg, doc["source"], Stream::source);
  if (a.d() != s.d() || a.p() != s.p()) {
    throw BadConfig("field 'source': (d,p) must equal (#bump_centers, time_basis)");
  }
  const BaselineSpec spec = baseline_from(cfg, a.d(), a.p());
  const Realized r = realize(cfg, a, spec);
  const ObservedEnsemble obs = apply(s, r.source, r.xi);
  const NormalEquationSystem sys = assemble_normal_equations(obs);

  // Flat-forcing check of the Green operator on the configured grid.
  const DirichletGreen green(ecfg.n_x, 0.0);
  const std::vector<double> ones(green.interior(), 1.0);
  const double flat = green.inner(green.solve(ones), ones);

  RunResult res;
  res.report = {{"kind", "elliptic_demo"},
                {"n_x", built.provenance.n_x},
                {"green_responses", built.provenance.green_responses},
                {"s1_norm", built.provenance.s1_norm},
                {"s2_norm", built.provenance.s2_norm},
                {"flat_forcing_functional", flat},
                {"flat_forcing_error", std::abs(flat - 1.0 / 12.0)},
                {"c_A", sys.c_A}};
  const auto m = solve_into(doc, sys, res.report);
  if (m) {
    res.report["cost"] = cost(obs, m->op);
    res.report["hs_norm"] = m->op.hs_norm();
  }
  std::ostringstream series;
  series << "n_in,residual_aggregate\n";
  const int n_out = std::min(s.p_out(), s.q());
  for (int n = 1; n <= s.p(); ++n) {
    const auto resid = truncation_residual(s, truncate(s, n, n_out), r.source, r.xi);
    series << n << ',' << csv_number(resid.aggregate) << '\n';
  }
  res.series_csv = series.str();
  res.exit_code = m ? kExitOk : kExitDomain;
  return res;
}

}  // namespace

RunResult run_pipeline(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case Kind::envelope_check: return run_envelope_check(cfg);
    case Kind::minimize: return run_minimize(cfg);
    case Kind::verify_extremal: return run_verify_extremal(cfg);
    case Kind::wss_envelope: return run_wss_envelope(cfg);
    case Kind::wss_filter: return run_wss_filter(cfg);
    case Kind::elliptic_demo: return run_elliptic_demo(cfg);
  }
  throw BadConfig("unhandled kind");
}

int run(const std::filesystem::path& config_path, const Overrides& overrides, std::ostream& out,
        std::ostream& err) {
  RunResult res;
  std::filesystem::path dir;
  try {
    const ExperimentConfig cfg = load_config(config_path, overrides);
    res = run_pipeline(cfg);
    dir = cfg.output_dir.empty() ? std::filesystem::current_path() : cfg.output_dir;
    std::filesystem::create_directories(dir);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto write = [&](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
    if (!f) {
      err << "error: cannot write '" << p.string() << "'\n";
      return false;
    }
    return true;
  };
  if (!write(dir / "report.json", res.report.dump(2) + "\n") || !write(dir / "series.csv", res.series_csv)) {
    return kExitUsage;
  }
  out << emit_summary(res.report);
  return res.exit_code;
}

}  // namespace envmm::cli
