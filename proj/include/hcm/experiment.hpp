#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcm/bounds.hpp"
#include "hcm/fractional.hpp"
#include "hcm/generators.hpp"
#include "hcm/graph.hpp"
#include "hcm/hardcore_exact.hpp"
#include "hcm/io.hpp"
#include "hcm/sampler.hpp"

namespace hcm {

inline constexpr int report_schema_version = 1;

/// Problem with an experiment spec (bad field, empty grid, missing file).
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Operation { audit, exact, sample, bound, chif, certify };

inline Operation parse_operation(const std::string& s) {
  if (s == "audit") return Operation::audit;
  if (s == "exact") return Operation::exact;
  if (s == "sample") return Operation::sample;
  if (s == "bound") return Operation::bound;
  if (s == "chif") return Operation::chif;
  if (s == "certify") return Operation::certify;
  throw SpecError("unknown operation '" + s + "'");
}

struct GraphSource {
  std::string name;
  std::optional<std::string> file;
  std::optional<GenSpec> gen;

  Graph load() const { return file ? load_graph_file(*file) : generate(*gen); }
};

struct SamplerSettings {
  std::uint64_t burn_in = 2000;
  std::uint64_t samples = 20000;
  std::uint64_t thinning = 1;
  unsigned chains = 8;
};

struct ExperimentSpec {
  std::vector<GraphSource> graphs;
  std::vector<Fugacity> lambdas;
  std::optional<double> eps;
  std::set<Operation> operations;
  SamplerSettings sampler;
  /// Random induced subgraphs for graphs above the exhaustive certificate cap.
  std::size_t certify_samples = 256;
  EnumerationLimits limits;
  std::uint64_t seed = 0;
  std::optional<std::string> json_out;
  std::optional<std::string> csv_out;

  bool wants(Operation op) const { return operations.count(op) != 0; }

  void validate() const {
    if (graphs.empty()) throw SpecError("spec lists no graphs");
    if (lambdas.empty()) throw SpecError("lambda grid is empty");
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
      const bool increasing = lambdas[i - 1].is_exact() && lambdas[i].is_exact()
                                  ? *lambdas[i - 1].exact() < *lambdas[i].exact()
                                  : lambdas[i - 1].value() < lambdas[i].value();
      if (!increasing) throw SpecError("lambda grid must be strictly increasing");
    }
    if (eps && !(*eps > 0)) throw SpecError("eps must be positive");
    if (operations.empty()) throw SpecError("spec lists no operations");
    if (sampler.chains < 2) throw SpecError("sampler needs at least two chains");
    if (sampler.samples == 0 || sampler.thinning == 0) throw SpecError("sampler samples and thinning must be positive");
    for (const auto& g : graphs) {
      if (g.file && !std::filesystem::exists(*g.file)) throw SpecError("graph file not found: " + *g.file);
      if (!g.file && !g.gen) throw SpecError("graph '" + g.name + "' has neither file nor gen");
    }
  }
};

namespace detail {

template <class T>
T field_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw SpecError(std::string("field '") + key + "' has the wrong type");
  }
}

inline GenSpec gen_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw SpecError("gen entry needs a \"kind\"");
  GenSpec s;
  try {
    s.kind = parse_gen_kind(j.at("kind").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
  s.n = field_or<std::size_t>(j, "n", 0);
  s.d = field_or<std::size_t>(j, "d", 0);
  s.b = field_or<std::size_t>(j, "b", 1);
  s.k = field_or<std::size_t>(j, "k", 0);
  s.p = field_or<double>(j, "p", 0.0);
  s.seed = field_or<std::uint64_t>(j, "seed", 0);
  if (j.contains("base")) s.base = generate(gen_from_json(j.at("base")));
  return s;
}

inline Fugacity fugacity_from_json(const json& j) {
  try {
    if (j.is_string()) return Fugacity::parse(j.get<std::string>());
    if (j.is_number()) return Fugacity::parse(j.dump());  // decimal text, read exactly
  } catch (const std::exception& e) {
    throw SpecError(std::string("bad lambda: ") + e.what());
  }
  throw SpecError("lambda entries must be numbers or \"p/q\" strings");
}

}  // namespace detail

/// Parses a spec. Relative graph file paths are resolved against `base_dir`.
inline ExperimentSpec parse_experiment_spec(const json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) throw SpecError("spec must be a JSON object");
  ExperimentSpec s;
  if (j.contains("graphs")) {
    std::size_t index = 0;
    for (const auto& g : j.at("graphs")) {
      GraphSource src;
      src.name = detail::field_or<std::string>(g, "name", "g" + std::to_string(index));
      if (g.contains("file")) {
        std::filesystem::path p = g.at("file").get<std::string>();
        src.file = (p.is_relative() ? base_dir / p : p).string();
      } else if (g.contains("gen")) {
        src.gen = detail::gen_from_json(g.at("gen"));
      }
      s.graphs.push_back(std::move(src));
      ++index;
    }
  }
  if (j.contains("lambdas"))
    for (const auto& l : j.at("lambdas")) s.lambdas.push_back(detail::fugacity_from_json(l));
  if (j.contains("eps")) s.eps = detail::field_or<double>(j, "eps", 0.0);
  if (j.contains("operations"))
    for (const auto& op : j.at("operations")) s.operations.insert(parse_operation(op.get<std::string>()));
  if (j.contains("sampler")) {
    const auto& sj = j.at("sampler");
    s.sampler.burn_in = detail::field_or<std::uint64_t>(sj, "burn_in", s.sampler.burn_in);
    s.sampler.samples = detail::field_or<std::uint64_t>(sj, "samples", s.sampler.samples);
    s.sampler.thinning = detail::field_or<std::uint64_t>(sj, "thinning", s.sampler.thinning);
    s.sampler.chains = detail::field_or<unsigned>(sj, "chains", s.sampler.chains);
  }
  if (j.contains("certify")) s.certify_samples = detail::field_or<std::size_t>(j.at("certify"), "samples", 256);
  if (j.contains("limits")) {
    s.limits.max_vertices = detail::field_or<std::size_t>(j.at("limits"), "max_vertices", s.limits.max_vertices);
    s.limits.rational_max_vertices =
        detail::field_or<std::size_t>(j.at("limits"), "rational_max_vertices", s.limits.rational_max_vertices);
  }
  s.seed = detail::field_or<std::uint64_t>(j, "seed", 0);
  if (j.contains("outputs")) {
    const auto& o = j.at("outputs");
    auto resolve = [&](const char* key) -> std::optional<std::string> {
      if (!o.contains(key)) return std::nullopt;
      std::filesystem::path p = o.at(key).get<std::string>();
      return (p.is_relative() ? base_dir / p : p).string();
    };
    s.json_out = resolve("json");
    s.csv_out = resolve("csv");
  }
  s.validate();
  return s;
}

inline ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("malformed spec JSON: ") + e.what());
  }
  return parse_experiment_spec(j, std::filesystem::path(path).parent_path());
}

// Occupancy sweep ------------------------------------------------------------

struct SweepRow {
  Fugacity lambda{1.0};
  std::string source;       ///< "exact" or "sampled"
  double value = 0;         ///< occupancy fraction
  double std_error = 0;     ///< zero for exact rows
  std::optional<Rational> exact_value;
  double occ_lower = 0;
  double asymptotic_occ = 0;
  double ratio = 0;         ///< value / occ_lower
};

/// Bound parameters used to compare a graph against the occupancy bound. An
/// edgeless graph has no degree to plug in; it is compared with Delta = 1,
/// f = 2, whose bound is still below lambda/(1+lambda).
inline std::pair<std::size_t, long double> bound_parameters(const SparsityAudit& a) {
  if (a.max_degree == 0) return {1, 2.0L};
  const long double d2 = static_cast<long double>(a.max_degree) * a.max_degree;
  return {a.max_degree, a.max_nbhd_edges ? d2 / a.max_nbhd_edges : d2 + 1};
}

/// Exact (or, above the enumeration cap and with a sampler configured,
/// sampled) occupancy fraction against the min-max lower bound and the
/// leading-order guarantee, across a fugacity grid.
inline std::vector<SweepRow> compare_occupancy_sweep(const Graph& g, const std::vector<Fugacity>& grid,
                                                     const EnumerationLimits& limits = {},
                                                     std::optional<ChainConfig> sampler = std::nullopt) {
  if (g.order() == 0) throw std::domain_error("occupancy sweep needs at least one vertex");
  const auto [delta, f] = bound_parameters(audit(g));
  const bool exact = g.order() <= std::min(limits.max_vertices, enumeration_hard_ceiling);
  if (!exact && !sampler)
    throw CapExceeded("graph exceeds the enumeration cap and no sampler was configured");
  std::optional<IndependenceCounts> counts;
  if (exact) counts = IndependenceCounts::enumerate(g, limits, false);
  std::vector<SweepRow> rows;
  for (const auto& lam : grid) {
    SweepRow r;
    r.lambda = lam;
    if (counts) {
      r.source = "exact";
      if (rational_mode(g, lam, limits)) {
        r.exact_value = evaluate(*counts, *lam.exact()).occupancy_fraction();
        r.value = to_double(*r.exact_value);
      } else {
        r.value = evaluate(*counts, lam.value()).occupancy_fraction();
      }
    } else {
      ChainConfig cfg = *sampler;
      cfg.lambda = lam.value();
      const auto est = glauber_run(g, cfg);
      r.source = "sampled";
      r.value = est.mean;
      r.std_error = est.std_error;
    }
    const long double l = lam.value();
    r.occ_lower = static_cast<double>(occupancy_lower_bound(delta, f, l).value);
    r.asymptotic_occ = static_cast<double>(asymptotic_occupancy(delta, l, std::optional<long double>(f)).value);
    r.ratio = r.value / r.occ_lower;
    rows.push_back(std::move(r));
  }
  return rows;
}

// Experiment runner ----------------------------------------------------------

struct RunOptions {
  bool deterministic = false;  ///< omit timings so identical specs give identical bytes
  unsigned threads = 1;
};

/// One (graph, lambda) row. Inequality columns carry "pass", "fail" or
/// "skipped".
struct ReportRow {
  json data;
  json flat;  ///< CSV cells keyed by column name
  bool failed = false;
};

struct Report {
  std::vector<json> graphs;
  std::vector<ReportRow> rows;

  bool any_failure() const {
    return std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.failed; });
  }

  json to_json() const {
    json rows_json = json::array();
    for (const auto& r : rows) rows_json.push_back(r.data);
    return {{"schema_version", report_schema_version},
            {"graphs", graphs},
            {"rows", std::move(rows_json)},
            {"status", any_failure() ? "fail" : "pass"}};
  }

  /// Fixed column order; missing values are empty cells.
  static const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = {
        "graph",        "n",           "m",          "max_degree",   "f",           "triangles",
        "lambda",       "occ_source",  "occupancy",  "occ_std_error", "occ_lower",  "asymptotic_occ",
        "occ_margin",   "occ_check",   "genhcm_check", "local_check", "alpha",      "beta",
        "certify_mode", "certify_worst_margin", "certify_check", "certified_bound", "chif", "chif_check",
        "time_ms"};
    return cols;
  }

  std::string to_csv() const {
    std::ostringstream out;
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : rows) {
      const auto& flat = r.flat;
      for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out << ',';
        if (!flat.contains(cols[i]) || flat[cols[i]].is_null()) continue;
        const auto& v = flat[cols[i]];
        std::string cell = v.is_string() ? v.get<std::string>() : v.dump();
        if (cell.find_first_of(",\"\n") != std::string::npos) {
          std::string quoted = "\"";
          for (char c : cell) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
          cell = quoted + "\"";
        }
        out << cell;
      }
      out << '\n';
    }
    return out.str();
  }
};

namespace detail {

inline const char* tag(bool ok) { return ok ? "pass" : "fail"; }

inline Rational exact_from(long double x) { return Rational(static_cast<double>(x)); }

}  // namespace detail

inline Report run_experiment(const ExperimentSpec& spec, const RunOptions& opts = {}) {
  spec.validate();
  using clock = std::chrono::steady_clock;
  Report report;
  for (std::size_t gi = 0; gi < spec.graphs.size(); ++gi) {
    const auto& src = spec.graphs[gi];
    const Graph g = src.load();
    const auto a = audit(g);
    const auto [delta, f] = bound_parameters(a);
    const bool has_edges = a.max_degree > 0;

    json gsum = {{"name", src.name}, {"source", src.file ? json(*src.file) : json(to_string(src.gen->kind))}};
    if (spec.wants(Operation::audit)) gsum["audit"] = to_json(a);

    std::optional<FractionalChromatic> chif;
    std::string chif_status = "skipped";
    if (spec.wants(Operation::chif) || spec.wants(Operation::certify)) {
      try {
        chif = chif_exact(g);
        chif_status = "computed";
        if (spec.wants(Operation::chif)) gsum["chif"] = to_json(*chif, true);
      } catch (const CapExceeded& e) {
        gsum["chif"] = {{"status", "skipped"}, {"reason", e.what()}};
      }
    }
    report.graphs.push_back(gsum);

    const bool enumerable = g.order() <= std::min(spec.limits.max_vertices, enumeration_hard_ceiling);
    std::optional<IndependenceCounts> counts;
    if (spec.wants(Operation::exact) && enumerable && g.order() > 0)
      counts = IndependenceCounts::enumerate(g, spec.limits, true);

    for (std::size_t li = 0; li < spec.lambdas.size(); ++li) {
      const Fugacity& lam = spec.lambdas[li];
      const auto t0 = clock::now();
      ReportRow row;
      json& d = row.data;
      json csv = {{"graph", src.name},
                  {"n", a.order},
                  {"m", a.edges},
                  {"max_degree", a.max_degree},
                  {"f", a.implied_f},
                  {"triangles", a.triangle_total},
                  {"lambda", lam.str()}};
      d = {{"graph", src.name}, {"lambda", lam.str()}, {"lambda_approx", lam.value()}};
      auto record = [&](const char* key, bool ok) {
        csv[key] = detail::tag(ok);
        if (!ok) row.failed = true;
      };

      std::optional<double> occupancy;
      if (spec.wants(Operation::exact)) {
        if (counts) {
          const bool rational = rational_mode(g, lam, spec.limits);
          HardCoreValues hc = rational ? HardCoreValues(evaluate(*counts, *lam.exact()))
                                       : HardCoreValues(evaluate(*counts, lam.value()));
          d["exact"] = to_json(hc);
          occupancy = std::visit(
              [](const auto& h) {
                if constexpr (std::is_same_v<std::decay_t<decltype(h)>, HardCoreExact<Rational>>)
                  return to_double(h.occupancy_fraction());
                else
                  return h.occupancy_fraction();
              },
              hc);
          csv["occ_source"] = rational ? "exact-rational" : "exact-double";
          csv["occupancy"] = *occupancy;
          const auto gen = rational ? detail::genhcm_margins(g, std::get<HardCoreExact<Rational>>(hc),
                                                            to_wide(*lam.exact()), true, 1e-12, 0.0)
                                    : detail::genhcm_margins(g, std::get<HardCoreExact<double>>(hc),
                                                            static_cast<long double>(lam.value()), false, 0.0, 1e-9);
          d["genhcm"] = to_json(gen);
          record("genhcm_check", gen.holds());
        } else {
          d["exact"] = {{"status", "skipped"},
                        {"reason", "n = " + std::to_string(g.order()) + " exceeds the enumeration cap"}};
          csv["occ_source"] = "skipped";
          csv["genhcm_check"] = "skipped";
        }
      }

      if (spec.wants(Operation::sample) && g.order() > 0) {
        ChainConfig cfg;
        cfg.lambda = lam.value();
        cfg.burn_in = spec.sampler.burn_in;
        cfg.samples = spec.sampler.samples;
        cfg.thinning = spec.sampler.thinning;
        cfg.chains = spec.sampler.chains;
        cfg.threads = std::max(1u, opts.threads);
        cfg.seed = detail::splitmix64(spec.seed ^ detail::splitmix64(gi * 1000003ULL + li));
        const auto est = glauber_run(g, cfg);
        d["sampled"] = to_json(est);
        if (!occupancy) {
          occupancy = est.mean;
          csv["occ_source"] = "sampled";
          csv["occupancy"] = est.mean;
          csv["occ_std_error"] = est.std_error;
        }
      }

      if ((spec.wants(Operation::bound) || spec.wants(Operation::exact)) && g.order() > 0) {
        const long double l = lam.value();
        const auto rep = bound_report<long double>(
            delta, f, l, spec.eps ? std::optional<long double>(*spec.eps) : std::nullopt,
            has_edges ? std::optional<std::size_t>(g.order()) : std::nullopt);
        if (spec.wants(Operation::bound)) d["bound"] = to_json(rep);
        const double lower = static_cast<double>(rep.occ_lower.value);
        csv["occ_lower"] = lower;
        csv["asymptotic_occ"] = static_cast<double>(rep.asymptotic_occ.value);
        if (occupancy && csv.value("occ_source", "") != "sampled") {
          csv["occ_margin"] = *occupancy - lower;
          record("occ_check", *occupancy - lower >= -1e-9);
        } else {
          csv["occ_check"] = "skipped";
        }
        if (has_edges && counts) {
          const auto local = verify_hcmbound_local(g, lam, static_cast<double>(rep.certificate.alpha),
                                                   static_cast<double>(rep.certificate.beta), spec.limits);
          d["local_bound"] = to_json(local);
          record("local_check", local.holds);
        } else {
          csv["local_check"] = "skipped";
        }
      }

      if (spec.wants(Operation::certify)) {
        if (!has_edges) {
          csv["certify_check"] = "skipped";
          d["certify"] = {{"status", "skipped"}, {"reason", "no edges"}};
        } else if (g.order() > enumeration_hard_ceiling) {
          csv["certify_check"] = "skipped";
          d["certify"] = {{"status", "skipped"}, {"reason", "n exceeds the enumeration ceiling"}};
        } else {
          const auto ab = alpha_beta<long double>(delta, f, static_cast<long double>(lam.value()));
          CertificateOptions co;
          co.mode = g.order() <= exhaustive_certificate_cap ? CertificateMode::exhaustive : CertificateMode::sampled;
          co.samples = spec.certify_samples;
          co.seed = detail::splitmix64(spec.seed + 0x5eedULL + gi);
          const auto cert =
              verify_certificate(g, detail::exact_from(ab.alpha), detail::exact_from(ab.beta), lam, co);
          d["certify"] = to_json(cert);
          csv["alpha"] = to_double(cert.alpha);
          csv["beta"] = to_double(cert.beta);
          csv["certify_mode"] = cert.exhaustive ? "exhaustive" : "sampled";
          csv["certify_worst_margin"] = cert.worst_margin;
          record("certify_check", cert.verified);
          if (cert.verified && cert.exhaustive) {
            const Rational bound = certified_upper_bound(g, cert);
            d["certify"]["certified_bound"] = to_string(bound);
            csv["certified_bound"] = to_double(bound);
            if (chif) record("chif_check", chif->value <= bound);
          }
        }
      }
      if (chif) csv["chif"] = to_string(chif->value);
      if (!csv.contains("chif_check")) csv["chif_check"] = "skipped";

      if (!opts.deterministic) {
        const double ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
        d["time_ms"] = ms;
        csv["time_ms"] = ms;
      }
      d["checks"] = json::object();
      for (const char* key : {"occ_check", "genhcm_check", "local_check", "certify_check", "chif_check"})
        if (csv.contains(key)) d["checks"][key] = csv[key];
      row.flat = std::move(csv);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace hcm
