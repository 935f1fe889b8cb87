// hcm: command-line front end for the hard-core model toolkit.
//
// Exit codes: 0 ok, 1 an inequality was violated, 2 usage / input error,
// 3 a size cap was exceeded.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hcm/hcm.hpp"

namespace {

using hcm::json;

enum Exit { ok = 0, violation = 1, usage = 2, cap = 3 };

struct Globals {
  std::string out;
  std::string format = "json";
  bool deterministic = false;
  unsigned threads = 1;
};

void emit(const Globals& g, const json& doc, const std::string& csv) {
  const std::string text = g.format == "csv" ? csv : doc.dump(2) + "\n";
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + g.out + "'");
  f << text;
}

// key,value CSV for documents without a natural table.
std::string flat_csv(const json& doc) {
  std::ostringstream out;
  out << "key,value\n";
  const json flat = doc.flatten();
  for (const auto& [k, v] : flat.items()) out << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  return out.str();
}

std::string audit_csv(const hcm::SparsityAudit& a, const hcm::Graph& g) {
  std::ostringstream out;
  out << "vertex,degree,nbhd_edges\n";
  for (hcm::Vertex v = 0; v < g.order(); ++v) out << v << ',' << g.degree(v) << ',' << a.nbhd_edges[v] << '\n';
  return out.str();
}

std::string vertex_table_csv(const json& hc) {
  std::ostringstream out;
  out << "vertex,marginal,nbr_occ,uncovered\n";
  const auto& m = hc["marginals"];
  for (std::size_t v = 0; v < m.size(); ++v) {
    auto cell = [](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
    out << v << ',' << cell(m[v]) << ',' << cell(hc["nbr_occ"][v]) << ','
        << (hc["uncovered"].size() > v ? cell(hc["uncovered"][v]) : "") << '\n';
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hard-core model occupancy, bounds and fractional colouring toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Globals glob;
  app.add_option("--out", glob.out, "Write output here instead of stdout");
  auto* format_opt =
      app.add_option("--format", glob.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--deterministic", glob.deterministic, "Omit timings so reruns are byte-identical");
  app.add_option("--threads", glob.threads, "Worker threads (advisory)")->check(CLI::PositiveNumber);

  hcm::EnumerationLimits limits;
  auto add_limits = [&](CLI::App* sub) {
    sub->add_option("--max-n", limits.max_vertices, "Exact enumeration cap")->capture_default_str();
    sub->add_option("--rational-max-n", limits.rational_max_vertices, "Largest n for rational arithmetic")
        ->capture_default_str();
  };

  std::string graph_path;
  std::string lambda_text = "1";

  auto* audit_cmd = app.add_subcommand("audit", "Degrees, neighbourhood edge counts, triangles and implied f");
  audit_cmd->add_option("graph", graph_path, "Graph file (edge list, or .json)")->required();

  auto* exact_cmd = app.add_subcommand("exact", "Exact hard-core quantities and the per-vertex/global checks");
  exact_cmd->add_option("graph", graph_path)->required();
  exact_cmd->add_option("--lambda", lambda_text, "Fugacity, e.g. 1/2 or 0.05")->capture_default_str();
  add_limits(exact_cmd);

  hcm::ChainConfig chain;
  std::optional<hcm::Vertex> vertex;
  auto* sample_cmd = app.add_subcommand("sample", "Glauber-dynamics estimate of the occupancy fraction");
  sample_cmd->add_option("graph", graph_path)->required();
  sample_cmd->add_option("--lambda", lambda_text)->capture_default_str();
  sample_cmd->add_option("--burn-in", chain.burn_in)->capture_default_str();
  sample_cmd->add_option("--samples", chain.samples)->capture_default_str();
  sample_cmd->add_option("--thinning", chain.thinning)->capture_default_str();
  sample_cmd->add_option("--chains", chain.chains)->capture_default_str();
  sample_cmd->add_option("--seed", chain.seed)->capture_default_str();
  sample_cmd->add_option("--vertex", vertex, "Estimate Pr(v in I) instead");

  std::size_t delta = 0;
  double f = 0;
  std::optional<double> eps;
  std::optional<std::size_t> order;
  auto* bound_cmd = app.add_subcommand("bound", "z*, occupancy bounds, certificate parameters, chi_f bound");
  auto* delta_opt = bound_cmd->add_option("--delta", delta, "Maximum degree");
  auto* f_opt = bound_cmd->add_option("--f", f, "Local sparsity parameter");
  auto* graph_opt = bound_cmd->add_option("--graph", graph_path, "Take Delta and f from this graph's audit");
  delta_opt->needs(f_opt);
  f_opt->needs(delta_opt);
  graph_opt->excludes(delta_opt)->excludes(f_opt);
  bound_cmd->add_option("--lambda", lambda_text)->capture_default_str();
  bound_cmd->add_option("--eps", eps, "Adds the tuned fugacity and theorem-level numbers");
  bound_cmd->add_option("--n", order, "Vertex count for theorem-level numbers");

  bool with_coloring = false;
  auto* chif_cmd = app.add_subcommand("chif", "Exact fractional chromatic number by exact LP");
  chif_cmd->add_option("graph", graph_path)->required();
  chif_cmd->add_flag("--coloring", with_coloring, "Include the optimal fractional colouring");

  std::string alpha_text, beta_text;
  bool exhaustive = false, derive = false;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 0;
  auto* cert_cmd = app.add_subcommand("certify", "Check the certificate condition on induced subgraphs");
  cert_cmd->add_option("graph", graph_path)->required();
  auto* a_opt = cert_cmd->add_option("--alpha", alpha_text);
  auto* b_opt = cert_cmd->add_option("--beta", beta_text);
  auto* d_opt = cert_cmd->add_flag("--derive", derive, "Use (alpha, beta) from the bound machinery at the audited (Delta, f)");
  a_opt->needs(b_opt);
  b_opt->needs(a_opt);
  d_opt->excludes(a_opt)->excludes(b_opt);
  cert_cmd->add_option("--lambda", lambda_text)->capture_default_str();
  auto* ex_opt = cert_cmd->add_flag("--exhaustive", exhaustive, "Every induced subgraph (n <= 15)");
  auto* s_opt = cert_cmd->add_option("--samples", samples, "Sampled mode: this many random induced subgraphs");
  ex_opt->excludes(s_opt);
  cert_cmd->add_option("--seed", seed)->capture_default_str();

  hcm::GenSpec gen;
  std::string kind;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a graph");
  gen_cmd->add_option("kind", kind, "random-regular, triangle-free-regular, blowup, cycle, complete, petersen, kneser, erdos-renyi")
      ->required();
  gen_cmd->add_option("--n", gen.n);
  gen_cmd->add_option("--d", gen.d);
  gen_cmd->add_option("--b", gen.b, "Blow-up factor");
  gen_cmd->add_option("--k", gen.k, "Kneser subset size");
  gen_cmd->add_option("--p", gen.p, "Edge probability");
  gen_cmd->add_option("--seed", gen.seed);
  std::string base_path;
  gen_cmd->add_option("--base", base_path, "Base graph file for blowup (default: cycle on n)");

  std::string spec_path;
  auto* exp_cmd = app.add_subcommand("experiment", "Run an experiment spec and write the report");
  exp_cmd->add_option("spec", spec_path, "Experiment spec (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? Exit::ok : Exit::usage;
  }

  try {
    if (*audit_cmd) {
      const auto g = hcm::load_graph_file(graph_path);
      const auto a = hcm::audit(g);
      emit(glob, hcm::to_json(a), audit_csv(a, g));
      return Exit::ok;
    }

    if (*exact_cmd) {
      const auto g = hcm::load_graph_file(graph_path);
      const auto lam = hcm::Fugacity::parse(lambda_text);
      const auto values = hcm::solve_hard_core(g, lam, limits);
      json doc = hcm::to_json(values);
      const auto check = hcm::verify_genhcm(g, lam, limits);
      doc["checks"] = hcm::to_json(check);
      emit(glob, doc, vertex_table_csv(doc));
      return check.holds() ? Exit::ok : Exit::violation;
    }

    if (*sample_cmd) {
      const auto g = hcm::load_graph_file(graph_path);
      chain.lambda = hcm::Fugacity::parse(lambda_text).value();
      chain.threads = glob.threads;
      json doc;
      if (vertex) {
        const auto est = hcm::estimate_marginal(g, chain, *vertex);
        doc = {{"vertex", *vertex}, {"estimate", est.estimate}, {"std_error", est.std_error},
               {"chains", hcm::to_json(est.detail)}};
      } else {
        doc = hcm::to_json(hcm::glauber_run(g, chain));
      }
      doc["lambda"] = lambda_text;
      doc["seed"] = chain.seed;
      emit(glob, doc, flat_csv(doc));
      return Exit::ok;
    }

    if (*bound_cmd) {
      if (!graph_path.empty()) {
        const auto g = hcm::load_graph_file(graph_path);
        const auto a = hcm::audit(g);
        delta = a.max_degree;
        f = a.implied_f;
        if (!order) order = g.order();
      } else if (delta_opt->count() == 0) {
        throw CLI::ValidationError("bound needs --delta and --f, or --graph");
      }
      const long double lam = hcm::Fugacity::parse(lambda_text).value();
      const auto rep = hcm::bound_report<long double>(
          delta, f, lam, eps ? std::optional<long double>(*eps) : std::nullopt, order);
      const json doc = hcm::to_json(rep);
      emit(glob, doc, flat_csv(doc));
      return Exit::ok;
    }

    if (*chif_cmd) {
      const auto g = hcm::load_graph_file(graph_path);
      const json doc = hcm::to_json(hcm::chif_exact(g), with_coloring);
      emit(glob, doc, flat_csv(doc));
      return Exit::ok;
    }

    if (*cert_cmd) {
      const auto g = hcm::load_graph_file(graph_path);
      const auto lam = hcm::Fugacity::parse(lambda_text);
      hcm::Rational alpha, beta;
      if (derive) {
        const auto [d, ff] = hcm::bound_parameters(hcm::audit(g));
        const auto ab = hcm::alpha_beta<long double>(d, ff, static_cast<long double>(lam.value()));
        alpha = hcm::Rational(static_cast<double>(ab.alpha));
        beta = hcm::Rational(static_cast<double>(ab.beta));
      } else if (a_opt->count()) {
        alpha = hcm::parse_rational(alpha_text);
        beta = hcm::parse_rational(beta_text);
      } else {
        throw CLI::ValidationError("certify needs --alpha and --beta, or --derive");
      }
      hcm::CertificateOptions co;
      co.seed = seed;
      if (samples) {
        co.mode = hcm::CertificateMode::sampled;
        co.samples = *samples;
      } else if (!exhaustive && g.order() > hcm::exhaustive_certificate_cap) {
        co.mode = hcm::CertificateMode::sampled;
      }
      const auto cert = hcm::verify_certificate(g, alpha, beta, lam, co);
      json doc = hcm::to_json(cert);
      if (cert.verified && cert.exhaustive) {
        const auto bound = hcm::certified_upper_bound(g, cert);
        doc["certified_bound"] = hcm::to_string(bound);
        doc["certified_bound_approx"] = hcm::to_double(bound);
      }
      emit(glob, doc, flat_csv(doc));
      return cert.verified ? Exit::ok : Exit::violation;
    }

    if (*gen_cmd) {
      gen.kind = hcm::parse_gen_kind(kind);
      if (!base_path.empty()) gen.base = hcm::load_graph_file(base_path);
      const auto g = hcm::generate(gen);
      std::ostringstream edges;
      hcm::write_edge_list(edges, g);
      // Edge list unless JSON is asked for explicitly or implied by the file name.
      const bool json_out = format_opt->count() ? glob.format == "json"
                                                : glob.out.size() >= 5 && glob.out.ends_with(".json");
      if (json_out) {
        Globals as_json = glob;
        as_json.format = "json";
        emit(as_json, hcm::graph_to_json(g), edges.str());
      } else {
        Globals as_text = glob;
        as_text.format = "csv";
        emit(as_text, json(), edges.str());
      }
      return Exit::ok;
    }

    if (*exp_cmd) {
      const auto spec = hcm::load_experiment_spec(spec_path);
      const auto report = hcm::run_experiment(spec, {glob.deterministic, glob.threads});
      const json doc = report.to_json();
      if (spec.json_out) {
        std::ofstream f(*spec.json_out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write '" + *spec.json_out + "'");
        f << doc.dump(2) << '\n';
      }
      if (spec.csv_out) {
        std::ofstream f(*spec.csv_out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write '" + *spec.csv_out + "'");
        f << report.to_csv();
      }
      emit(glob, doc, report.to_csv());
      return report.any_failure() ? Exit::violation : Exit::ok;
    }
  } catch (const hcm::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return Exit::cap;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return Exit::usage;
  } catch (const hcm::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return Exit::usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::usage;
  }
  return Exit::usage;
}
