#include "primeprod/report.hpp"

#include <cstdio>

namespace primeprod {

using nlohmann::json;

std::string csv_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json group_json(const UnitGroup& G) {
  json j;
  j["q"] = G.q();
  json fac = json::array();
  for (auto [p, e] : G.modulus().factorization) fac.push_back({{"p", p}, {"e", e}});
  j["factorization"] = fac;
  j["cube_free"] = G.cube_free();
  j["phi"] = G.phi();
  j["component_orders"] = G.component_orders();
  j["generators"] = G.generators();
  return j;
}

std::string campaign_csv(const CampaignReport& rep) {
  std::string out =
      "q,cube_free,phi,e2_size,e2_density_num,e2_density_den,e3_complete,e3_missing_count\n";
  for (auto& r : rep.rows) {
    out += std::to_string(r.q);
    out += ',';
    out += r.cube_free ? '1' : '0';
    out += ',';
    out += std::to_string(r.phi);
    out += ',';
    out += std::to_string(r.e2_size);
    out += ',';
    out += std::to_string(r.e2_density.num);
    out += ',';
    out += std::to_string(r.e2_density.den);
    out += ',';
    out += r.e3_complete ? '1' : '0';
    out += ',';
    out += std::to_string(r.e3_missing_count);
    out += '\n';
  }
  return out;
}

json campaign_json(const CampaignReport& rep, bool include_timing) {
  json j;
  j["version"] = kVersion;
  const auto& c = rep.config;
  j["config"] = {{"q_lo", c.q_lo},
                 {"q_hi", c.q_hi},
                 {"filter", c.filter == CampaignFilter::all        ? "all"
                            : c.filter == CampaignFilter::cube_free ? "cube_free"
                                                                     : "prime"},
                 {"n_rule", c.n_rule == NRule::equal_q    ? "q"
                            : c.n_rule == NRule::q_pow_12 ? "q^1.2"
                                                          : "explicit"},
                 {"explicit_n", c.explicit_n},
                 {"task_e3", c.task_e3},
                 {"task_e2", c.task_e2},
                 {"task_exceptional", c.task_exceptional},
                 {"threads", c.threads}};
  json exc = json::array();
  for (auto& e : rep.exceptions)
    exc.push_back({{"q", e.q}, {"kind", e.kind}, {"witnesses", e.witnesses}});
  json results;
  results["rows"] = rep.rows.size();
  results["exceptions"] = exc;
  if (rep.min_e2) {
    results["min_e2"] = {{"q", rep.min_e2_q},
                         {"num", rep.min_e2->num},
                         {"den", rep.min_e2->den},
                         {"value", rep.min_e2->value()}};
  }
  j["results"] = results;
  if (include_timing) j["timing_seconds"] = rep.seconds;
  return j;
}

json char_sum_profile_json(const CharSumProfile& prof) {
  json j;
  j["q"] = prof.q;
  j["char_index"] = prof.char_index;
  j["order"] = prof.order;
  j["cutoffs"] = prof.cutoffs;
  json sums = json::array(), psums = json::array();
  for (auto& s : prof.sums) sums.push_back({{"re", s.real()}, {"im", s.imag()}});
  for (auto& row : prof.prime_sums) {
    json r;
    const char* names[4] = {"one", "log", "recip", "log_over_p"};
    for (int i = 0; i < 4; ++i) r[names[i]] = {{"re", row[i].real()}, {"im", row[i].imag()}};
    psums.push_back(r);
  }
  j["sums"] = sums;
  j["prime_sums"] = psums;
  return j;
}

std::string char_sum_profile_csv(const CharSumProfile& prof) {
  std::string out = "q,char,N,re,im\n";
  for (std::size_t i = 0; i < prof.cutoffs.size(); ++i) {
    out += std::to_string(prof.q) + ',' + std::to_string(prof.char_index) + ',' +
           std::to_string(prof.cutoffs[i]) + ',' + csv_double(prof.sums[i].real()) + ',' +
           csv_double(prof.sums[i].imag()) + '\n';
  }
  return out;
}

std::string weight_dump_csv(const SieveWeightSet& W) {
  std::string out = "d,lambda_plus,lambda_minus\n";
  for (std::size_t i = 0; i < W.support.size(); ++i) {
    out += std::to_string(W.support[i]) + ',' + std::to_string(int(W.lambda_plus[i])) + ',' +
           std::to_string(int(W.lambda_minus[i])) + '\n';
  }
  return out;
}

std::string coset_stats_csv(std::uint32_t q, std::uint64_t Y, const CosetPrimeStats& stats) {
  std::string out = "q,Y,coset_rep,count,sum_log_p,sum_1_over_p,sum_logp_over_p\n";
  for (std::size_t i = 0; i < stats.representatives.size(); ++i) {
    out += std::to_string(q) + ',' + std::to_string(Y) + ',' +
           std::to_string(stats.representatives[i]) + ',' + std::to_string(stats.count[i]) + ',' +
           csv_double(stats.sum_log[i]) + ',' + csv_double(stats.sum_recip[i]) + ',' +
           csv_double(stats.sum_log_over_p[i]) + '\n';
  }
  return out;
}

namespace {

std::string bitset_hex(const ResidueSet& S) {
  std::string hex;
  const auto& b = S.bits();
  int nibble = 0, filled = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b.test(i)) nibble |= 1 << (i % 4);
    if (i % 4 == 3 || i + 1 == b.size()) {
      hex += "0123456789abcdef"[nibble];
      nibble = 0;
      ++filled;
    }
  }
  return hex;
}

}  // namespace

json structure_report_json(std::uint32_t q, const StructureReport& rep) {
  json j;
  j["q"] = q;
  j["branch"] =
      rep.branch == StructureBranch::large_product_set ? "large_product_set" : "stuck_in_cosets";
  j["hypothesis_ok"] = rep.hypothesis_ok;
  j["Y"] = rep.Y;
  if (rep.k) j["k"] = *rep.k;
  j["H_members_compressed"] = bitset_hex(rep.H.members);
  json ac = json::array(), bc = json::array();
  for (auto& c : rep.a_cosets) ac.push_back(c.representative);
  for (auto& c : rep.b_cosets) bc.push_back(c.representative);
  j["a_cosets"] = ac;
  j["b_cosets"] = bc;
  j["sizes"] = {{"product", rep.product_size}, {"H", rep.H.members.size()}};
  j["consistent"] = rep.consistent;
  return j;
}

json dense_model_json(const DenseModel& model, const ModelVerification* verification) {
  json j;
  j["q"] = model.q;
  j["N"] = model.N;
  j["delta"] = model.delta;
  j["theta"] = model.params.theta;
  j["theta0"] = model.params.theta0;
  j["epsilon"] = model.params.epsilon;
  j["delta_below_tenth"] = model.delta_below_tenth;
  j["spectrum_indices"] = model.spectrum;
  j["bohr_size"] = model.bohr.size();
  json g = json::array();
  for (std::uint32_t r = 0; r < model.q; ++r)
    if (model.bohr.group().is_unit(r)) g.push_back(model.g[r]);
  j["g_values"] = g;
  if (verification) {
    const auto& v = *verification;
    j["property_report"] = {{"mean_g", v.mean_g},
                            {"mean_f", v.mean_f},
                            {"mean_gap", v.mean_gap},
                            {"contraction_excess", v.contraction_excess},
                            {"proximity_excess", v.proximity_excess},
                            {"fourier_identity_error", v.fourier_identity_error},
                            {"direct_vs_fourier", v.direct_vs_fourier},
                            {"max_transform_gap", v.max_transform_gap},
                            {"max_g", v.max_g},
                            {"eta_measured", v.eta_measured},
                            {"nu_leakage_bound", v.nu_leakage_bound},
                            {"max_coset_discrepancy", v.max_coset_discrepancy},
                            {"cosets_checked", v.cosets_checked}};
  }
  return j;
}

json exceptional_pipeline_json(const ExceptionalPipelineReport& rep) {
  json j;
  j["q"] = rep.q;
  json rows = json::array();
  for (auto& r : rep.rows) {
    rows.push_back({{"char_index", r.char_index},
                    {"log_sum", r.log_sum},
                    {"first_alternative", r.first_alternative},
                    {"L1", r.l1},
                    {"denom_factor", r.denom_factor},
                    {"best_ratio", r.best_ratio},
                    {"best_y", r.best_y},
                    {"grid_y", r.grid_y},
                    {"grid_count", r.grid_count},
                    {"grid_ratio", r.grid_ratio}});
  }
  j["rows"] = rows;
  return j;
}

json exceptional_scan_json(const ExceptionalScanReport& rep) {
  json j;
  j["q"] = rep.q;
  j["prime_limit"] = rep.prime_limit;
  j["l1_x"] = rep.l1_x;
  json rows = json::array();
  for (auto& r : rep.rows) {
    rows.push_back({{"char_index", r.char_index},
                    {"minus_count", r.minus_count},
                    {"plus_count", r.plus_count},
                    {"total", r.total},
                    {"L1_one_star", r.l1.one_star_average},
                    {"L1_series", r.l1.dirichlet_series},
                    {"qr_upper_factor", r.qr_upper_factor}});
  }
  j["rows"] = rows;
  return j;
}

json burgess_report_json(std::uint32_t q, const BurgessDecayReport& rep) {
  json j;
  j["q"] = q;
  json rows = json::array();
  for (auto& r : rep.rows) {
    rows.push_back({{"y", r.y},
                    {"max_ratio", r.max_ratio},
                    {"argmax_char", r.argmax_char},
                    {"max_ratio_primitive", r.max_ratio_primitive},
                    {"argmax_char_primitive", r.argmax_char_primitive}});
  }
  j["rows"] = rows;
  j["conductor"] = rep.conductor;
  return j;
}

}  // namespace primeprod
