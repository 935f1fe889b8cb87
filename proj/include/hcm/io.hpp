#pragma once

// JSON views of results. Exact rationals are written as "p/q" strings next to
// a double approximation; long doubles are narrowed to double.

#include <optional>
#include <string>

#include <json.hpp>

#include "hcm/bounds.hpp"
#include "hcm/fractional.hpp"
#include "hcm/graph.hpp"
#include "hcm/hardcore_exact.hpp"
#include "hcm/sampler.hpp"

namespace hcm {

using nlohmann::json;

namespace detail {

inline json scalar_json(const Rational& r) { return to_string(r); }
inline json scalar_json(double x) { return x; }
inline json scalar_json(long double x) { return static_cast<double>(x); }

template <class T>
json vector_json(const std::vector<T>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(scalar_json(x));
  return out;
}

}  // namespace detail

inline json to_json(const SparsityAudit& a) {
  return {{"n", a.order},
          {"m", a.edges},
          {"max_degree", a.max_degree},
          {"nbhd_edges", a.nbhd_edges},
          {"max_nbhd_edges", a.max_nbhd_edges},
          {"triangles", a.triangle_total},
          {"implied_f", a.implied_f},
          {"triangle_free", a.triangle_free()}};
}

template <class Scalar>
json to_json(const HardCoreExact<Scalar>& hc) {
  constexpr bool exact = std::is_same_v<Scalar, Rational>;
  json j = {{"mode", exact ? "rational" : "double"},
            {"lambda", detail::scalar_json(hc.lambda)},
            {"Z", detail::scalar_json(hc.partition)},
            {"occupancy", detail::scalar_json(hc.occupancy)},
            {"occupancy_fraction", detail::scalar_json(hc.occupancy_fraction())},
            {"marginals", detail::vector_json(hc.marginal)},
            {"nbr_occ", detail::vector_json(hc.nbr_occ)},
            {"uncovered", detail::vector_json(hc.uncovered)}};
  if constexpr (exact) j["occupancy_fraction_approx"] = to_double(hc.occupancy_fraction());
  return j;
}

inline json to_json(const HardCoreValues& v) {
  return std::visit([](const auto& hc) { return to_json(hc); }, v);
}

inline json to_json(const GenhcmReport& r) {
  json j = {{"mode", r.exact_mode ? "rational" : "double"},
            {"tolerance", r.tolerance},
            {"vertex", {{"lhs", r.vertex_lhs}, {"rhs", r.vertex_rhs}, {"margin", r.vertex_margin},
                        {"status", r.vertex_holds ? "pass" : "fail"}}},
            {"global", {{"lhs", r.global_lhs}, {"rhs", r.global_rhs}, {"margin", r.global_margin},
                        {"status", r.global_holds ? "pass" : "fail"}}}};
  if (r.witness) j["witness"] = *r.witness;
  return j;
}

inline json to_json(const LocalBoundReport& r) {
  json j = {{"mode", r.exact_mode ? "rational" : "double"},
            {"max_degree", r.delta},
            {"f", r.f},
            {"rhs", r.rhs},
            {"lhs", r.lhs},
            {"margin", r.margin},
            {"status", r.holds ? "pass" : "fail"}};
  if (r.witness) j["witness"] = *r.witness;
  return j;
}

inline json to_json(const SampleEstimate& s) {
  return {{"mean", s.mean},
          {"std_error", s.std_error},
          {"per_chain_means", s.per_chain_means},
          {"steps", s.steps},
          {"acceptance_rate", s.acceptance_rate()}};
}

template <class Real>
json to_json(const ZSolution<Real>& z) {
  return {{"z_star", static_cast<double>(z.z)},
          {"y", static_cast<double>(z.y)},
          {"Lambda", static_cast<double>(z.Lambda)},
          {"sandwich", {static_cast<double>(z.sandwich_lower), static_cast<double>(z.sandwich_upper)}},
          {"residual", static_cast<double>(z.residual)}};
}

template <class Real>
json to_json(const BoundReport<Real>& r) {
  auto d = [](const Real& x) { return static_cast<double>(x); };
  json j = {{"max_degree", r.delta},
            {"f", d(r.f)},
            {"lambda", d(r.lambda)},
            {"z", to_json(r.z)},
            {"occ_lower", d(r.occ_lower.value)},
            {"asymptotic_occ", d(r.asymptotic_occ.value)},
            {"admissibility", {{"Lambda", d(r.asymptotic_occ.Lambda)}, {"drift", d(r.asymptotic_occ.drift)}}},
            {"alpha", d(r.certificate.alpha)},
            {"beta", d(r.certificate.beta)},
            {"chif_upper", d(r.chif_upper)}};
  if (r.eps) j["eps"] = d(*r.eps);
  if (r.tuned)
    j["tuned"] = {{"lambda", d(r.tuned->lambda)},
                  {"z_star", d(r.tuned->z)},
                  {"bound", d(r.tuned->bound)},
                  {"asymptotic_target", d(r.tuned->asymptotic_target)},
                  {"ratio", d(r.tuned->ratio)}};
  if (r.theorem)
    j["theorem"] = {{"n", *r.n},
                    {"independence_lb", d(r.theorem->independence_lb)},
                    {"chif_ub", d(r.theorem->chif_ub)},
                    {"below_asymptotic_regime", r.theorem->below_asymptotic_regime}};
  if (r.basic)
    j["basic"] = {{"independence_lb", d(r.basic->independence_lb)},
                  {"chromatic_ub", d(r.basic->chromatic_ub)},
                  {"asymptotic", r.basic->asymptotic}};
  return j;
}

inline json to_json(const FractionalChromatic& fc, bool with_coloring) {
  json j = {{"chif", to_string(fc.value)},
            {"chif_approx", to_double(fc.value)},
            {"columns", fc.columns},
            {"pivots", fc.pivots},
            {"vertex_weights", detail::vector_json(fc.vertex_weights)}};
  if (with_coloring) {
    json atoms = json::array();
    for (const auto& a : fc.coloring.atoms) atoms.push_back({{"set", a.set}, {"weight", to_string(a.weight)}});
    j["coloring"] = {{"atoms", std::move(atoms)}, {"objective", to_string(fc.coloring.objective)}};
  }
  return j;
}

inline json to_json(const Certificate& c) {
  json j = {{"alpha", to_string(c.alpha)},
            {"beta", to_string(c.beta)},
            {"lambda", c.lambda.str()},
            {"mode", c.exhaustive ? "exhaustive" : "sampled"},
            {"arithmetic", c.exact_arithmetic ? "rational" : "long double"},
            {"verified", c.verified},
            {"worst_margin", c.worst_margin},
            {"subgraphs_checked", c.subgraphs_checked}};
  if (c.worst_margin_exact) j["worst_margin_exact"] = to_string(*c.worst_margin_exact);
  if (!c.exhaustive)
    j["disclaimer"] = "sampled mode: only a seeded family of induced subgraphs was checked; no bound is certified";
  if (c.witness_subgraph) j["witness"] = {{"subgraph", *c.witness_subgraph}, {"vertex", *c.witness_vertex}};
  return j;
}

}  // namespace hcm
