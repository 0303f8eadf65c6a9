// Command-line front end: batch experiments over Z_q^x with deterministic
// JSON/CSV reports.  Exit codes: 0 ok, 1 domain error, 2 capacity error,
// 3 flagged report (popular-products witness search failed), 64 usage.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>

#include "primeprod/report.hpp"

using namespace primeprod;
using nlohmann::json;

namespace {

struct OutputSink {
  std::string path;  // empty = stdout

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      if (!text.empty() && text.back() != '\n') std::cout << '\n';
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << text;
  }
  void write(const json& j) const { write(j.dump(2) + "\n"); }
};

json config_echo(const std::vector<std::pair<std::string, json>>& kv) {
  json j;
  for (auto& [k, v] : kv) j[k] = v;
  return j;
}

json envelope(json config, json results) {
  json j;
  j["version"] = kVersion;
  j["config"] = std::move(config);
  j["results"] = std::move(results);
  return j;
}

ResidueSet random_subset(const UnitGroup& G, std::mt19937_64& rng, double density) {
  ResidueSet S(G);
  std::bernoulli_distribution coin(density);
  for (std::uint32_t r = 0; r < G.q(); ++r)
    if (G.is_unit(r) && coin(rng)) S.add(r);
  if (S.empty()) S.add(1);
  return S;
}

int run_group(std::uint64_t q, std::uint64_t index, const OutputSink& sink) {
  UnitGroup G(q);
  json j = group_json(G);
  if (index) {
    json subs = json::array();
    for (auto& H : subgroups_of_index(G, index)) {
      json h;
      h["members"] = H.members.elements();
      h["order"] = H.order();
      auto gen = quotient_is_cyclic(H);
      h["quotient_cyclic_generator"] = gen ? json(*gen) : json();
      json cs = json::array();
      for (auto& c : cosets(H).cosets) cs.push_back(c.representative);
      h["coset_representatives"] = cs;
      subs.push_back(h);
    }
    j["subgroups_of_index"] = {{"Y", index}, {"subgroups", subs}};
  }
  sink.write(envelope(config_echo({{"command", "group"}, {"q", q}, {"index", index}}), j));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"products-of-primes experiments over Z_q^x"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string output;
  std::string format = "json";
  int threads = 1;
  std::uint64_t seed = 1;
  bool timing = false;
  app.add_option("--output,-o", output, "output file (default stdout)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", threads, "worker threads for campaigns");
  app.add_option("--seed", seed, "seed for randomized suites");
  app.add_flag("--timing", timing, "include timing in JSON output");

  // group
  auto* c_group = app.add_subcommand("group", "structure of Z_q^x");
  std::uint64_t g_q = 7, g_index = 0;
  c_group->add_option("--q", g_q, "modulus")->required();
  c_group->add_option("--index", g_index, "list subgroups of this index");

  // chars
  auto* c_chars = app.add_subcommand("chars", "character sums and profiles");
  std::uint64_t ch_q = 7, ch_char = 1, ch_l1x = 0;
  std::vector<std::uint64_t> ch_cutoffs;
  std::vector<std::uint64_t> ch_burgess;
  bool ch_l1 = false;
  c_chars->add_option("--q", ch_q)->required();
  c_chars->add_option("--char", ch_char, "character index");
  c_chars->add_option("--cutoffs", ch_cutoffs, "profile cutoffs N");
  c_chars->add_option("--burgess", ch_burgess, "y grid for the decay report");
  c_chars->add_flag("--l1", ch_l1, "L(1, psi) estimates for real characters");
  c_chars->add_option("--l1-x", ch_l1x, "x for the L1 estimators");

  // sieve
  auto* c_sieve = app.add_subcommand("sieve", "sieve weights and checks");
  double s_D = 900, s_z = 30, s_kappa = 0;
  std::uint64_t s_check = 0;
  bool s_dump = false;
  c_sieve->add_option("--D", s_D, "level");
  c_sieve->add_option("--z", s_z, "sifting limit");
  c_sieve->add_option("--kappa", s_kappa, "fundamental-lemma dimension (0 = linear)");
  c_sieve->add_option("--check-n", s_check, "verify the sandwich for n <= this");
  c_sieve->add_flag("--dump", s_dump, "CSV dump of the weights");

  // products
  auto* c_prod = app.add_subcommand("products", "randomized product-set suites");
  std::uint64_t p_q = 101, p_trials = 100;
  std::string p_suite = "kneser";
  c_prod->add_option("--q", p_q)->required();
  c_prod->add_option("--trials", p_trials);
  c_prod->add_option("--suite", p_suite, "kneser | popular | energy | structure")
      ->check(CLI::IsMember({"kneser", "popular", "energy", "structure"}));

  // model
  auto* c_model = app.add_subcommand("model", "multiplicative dense model");
  std::uint64_t m_q = 101, m_N = 0;
  double m_delta = 0.2, m_eps = 0.05, m_thr = 0.0;
  bool m_verify = false;
  int m_conv = 0;
  c_model->add_option("--q", m_q)->required();
  c_model->add_option("--N", m_N, "window length (default q)");
  c_model->add_option("--delta", m_delta);
  c_model->add_option("--epsilon", m_eps);
  c_model->add_flag("--verify", m_verify, "attach the property report");
  c_model->add_option("--threshold", m_thr, "emit A = {g >= eps/10} for this eps");
  c_model->add_option("--convolution", m_conv, "convolution comparison of this arity");

  // ek
  auto* c_ek = app.add_subcommand("ek", "E_k(N) computation");
  std::uint64_t e_q = 7, e_N = 0, e_cap = 0;
  int e_k = 3;
  c_ek->add_option("--q", e_q)->required();
  c_ek->add_option("--k", e_k);
  c_ek->add_option("--N", e_N, "prime cutoff (default q)");
  c_ek->add_option("--min-complete", e_cap, "search least N <= cap with E_k complete");

  // campaign
  auto* c_camp = app.add_subcommand("campaign", "sweep a q range");
  CampaignConfig camp;
  std::string camp_filter = "all", camp_task = "e3,e2", camp_nrule = "q";
  std::uint64_t camp_from = 3, camp_to = 100, camp_N = 0;
  c_camp->add_option("--from", camp_from)->required();
  c_camp->add_option("--to", camp_to)->required();
  c_camp->add_option("--filter", camp_filter)->check(CLI::IsMember({"all", "cube_free", "prime"}));
  c_camp->add_option("--task", camp_task, "comma list of e3,e2,exceptional");
  c_camp->add_option("--n-rule", camp_nrule)->check(CLI::IsMember({"q", "q1.2", "explicit"}));
  c_camp->add_option("--N", camp_N, "explicit N for --n-rule explicit");

  // exceptional
  auto* c_exc = app.add_subcommand("exceptional", "exceptional-character reports");
  std::uint64_t x_q = 5, x_primes = 0, x_l1x = 0;
  bool x_pipeline = false;
  c_exc->add_option("--q", x_q)->required();
  c_exc->add_option("--prime-limit", x_primes, "fraction scan limit (default q)");
  c_exc->add_option("--l1-x", x_l1x);
  c_exc->add_flag("--pipeline", x_pipeline, "run the dichotomy pipeline too");

  // bounds
  auto* c_bounds = app.add_subcommand("bounds", "empirical band reports");
  std::uint64_t b_q = 101, b_Y = 2, b_N = 0;
  double b_alpha = 1.0;
  bool b_coset_stats = false;
  c_bounds->add_option("--q", b_q)->required();
  c_bounds->add_option("--Y", b_Y, "subgroup index for coset counts");
  c_bounds->add_option("--N", b_N, "range for almost-prime counts (default q^1.5)");
  c_bounds->add_option("--alpha", b_alpha, "realpart weight parameter");
  c_bounds->add_flag("--coset-stats", b_coset_stats,
                     "emit per-coset prime statistics (CSV with --format csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  OutputSink sink{output};
  try {
    if (*c_group) return run_group(g_q, g_index, sink);

    if (*c_chars) {
      UnitGroup G(ch_q);
      CharacterGroup CG(G);
      if (!ch_burgess.empty()) {
        auto rep = burgess_decay_report(CG, ch_burgess);
        sink.write(envelope(config_echo({{"command", "chars"}, {"q", ch_q}, {"burgess", ch_burgess}}),
                            burgess_report_json(G.q(), rep)));
        return 0;
      }
      if (ch_l1) {
        std::uint64_t x = ch_l1x ? ch_l1x : std::max<std::uint64_t>(ch_q, 1'000'000);
        json rows = json::array();
        for (auto& c : CG.all()) {
          if (c.is_principal() || !c.is_real()) continue;
          auto est = L1(c, x);
          rows.push_back({{"char_index", c.index()},
                          {"one_star_average", est.one_star_average},
                          {"dirichlet_series", est.dirichlet_series}});
        }
        sink.write(envelope(config_echo({{"command", "chars"}, {"q", ch_q}, {"l1_x", x}}),
                            json{{"l1", rows}}));
        return 0;
      }
      if (ch_cutoffs.empty()) ch_cutoffs = {ch_q, 2 * ch_q, 5 * ch_q};
      PrimeTable PT = PrimeTable::sieve(*std::max_element(ch_cutoffs.begin(), ch_cutoffs.end()));
      auto prof = char_sum_profile(CG.character(ch_char), PT, ch_cutoffs);
      if (format == "csv")
        sink.write(char_sum_profile_csv(prof));
      else
        sink.write(envelope(config_echo({{"command", "chars"}, {"q", ch_q}, {"char", ch_char}}),
                            char_sum_profile_json(prof)));
      return 0;
    }

    if (*c_sieve) {
      SieveWeightSet W = s_kappa > 0 ? fundamental_weights(s_D, s_z, s_kappa)
                                     : linear_weights(s_D, s_z);
      if (s_dump && format == "csv") {
        sink.write(weight_dump_csv(W));
        return 0;
      }
      json j;
      j["kind"] = W.kind == SieveKind::linear ? "linear" : "fundamental";
      j["z"] = W.z;
      j["D"] = W.D;
      j["s"] = W.s;
      j["beta"] = W.beta;
      j["support_size"] = W.support.size();
      if (W.s >= 1.0 && W.s <= 4.0) {
        auto sv = sieve_function(std::min(W.s, 4.0));
        if (sv.F0) j["F0"] = *sv.F0;
        if (sv.f0) j["f0"] = *sv.f0;
      }
      if (s_check) {
        std::vector<std::int32_t> plus, minus;
        divisor_sums(W, s_check, plus, minus);
        PrimeTable PT = PrimeTable::sieve(std::max<std::uint64_t>(static_cast<std::uint64_t>(W.z) + 1, 3));
        std::uint64_t viol = 0;
        std::vector<char> rough(s_check + 1, 1);
        for (auto p : PT.primes()) {
          if (double(p) >= W.z) break;
          for (std::uint64_t m = p; m <= s_check; m += p) rough[m] = 0;
        }
        for (std::uint64_t n = 1; n <= s_check; ++n)
          if (!(minus[n] <= rough[n] && rough[n] <= plus[n])) ++viol;
        j["sandwich_checked_to"] = s_check;
        j["sandwich_violations"] = viol;
      }
      sink.write(envelope(config_echo({{"command", "sieve"}, {"D", s_D}, {"z", s_z}, {"kappa", s_kappa}}), j));
      return 0;
    }

    if (*c_prod) {
      UnitGroup G(p_q);
      std::mt19937_64 rng(seed);
      json rows = json::array();
      std::uint64_t flagged = 0;
      for (std::uint64_t t = 0; t < p_trials; ++t) {
        std::uniform_real_distribution<double> dens(0.05, 0.9);
        ResidueSet A = random_subset(G, rng, dens(rng));
        ResidueSet B = random_subset(G, rng, dens(rng));
        if (p_suite == "kneser") {
          auto audit = kneser_audit(A, B);
          if (!audit.kneser_holds ||
              audit.min_convolution + 0ll < audit.convolution_bound)
            rows.push_back({{"trial", t}, {"violation", true}});
        } else if (p_suite == "structure") {
          std::bernoulli_distribution coin(0.45);
          ResidueSet As(G), Bs(G);
          for (std::uint32_t r = 0; r < G.q(); ++r)
            if (G.is_unit(r)) {
              if (coin(rng)) As.add(r);
              if (coin(rng)) Bs.add(r);
            }
          if (double(As.size()) < 0.4 * G.phi() || double(Bs.size()) < 0.4 * G.phi()) continue;
          auto rep = structure_classify(As, Bs, 0.4, 0.35, 0.75);
          if (rows.size() < 8) rows.push_back(structure_report_json(G.q(), rep));
        } else if (p_suite == "energy") {
          auto prod = product_set(A, B);
          auto e = multiplicative_energy(A, B);
          unsigned __int128 lhs =
              static_cast<unsigned __int128>(A.size()) * B.size() * A.size() * B.size();
          if (lhs > static_cast<unsigned __int128>(prod.size()) * e)
            rows.push_back({{"trial", t}, {"violation", true}});
        } else {
          double eps = 0.3;
          std::uint64_t tt = static_cast<std::uint64_t>(std::ceil(eps * G.phi() / 10.0));
          std::uint64_t uu = std::max<std::uint64_t>(
              1, static_cast<std::uint64_t>(eps * eps * G.phi() / 1000.0));
          if (A.size() < tt || B.size() < tt) continue;
          auto rep = popular_products(A, B, tt, uu);
          if (rep.flagged) {
            ++flagged;
            rows.push_back({{"trial", t}, {"flagged", true}});
          }
        }
      }
      json j;
      j["suite"] = p_suite;
      j["trials"] = p_trials;
      j["violations_or_flags"] = rows;
      sink.write(envelope(config_echo({{"command", "products"}, {"q", p_q}, {"seed", seed}}), j));
      return flagged ? 3 : 0;
    }

    if (*c_model) {
      if (!m_N) m_N = m_q;
      UnitGroup G(m_q);
      CharacterGroup CG(G);
      PrimeTable PT = PrimeTable::sieve(std::max<std::uint64_t>(m_N, 1000));
      auto f = ArithmeticFunctionWindow::prime_indicator(G, PT, m_N, m_eps);
      auto W = majorant_weights(f.params());
      auto nu = ArithmeticFunctionWindow::sieve_majorant(G, W, m_N, m_eps);
      auto M = dense_model(CG, f, m_delta);
      json j;
      if (m_verify) {
        auto V = verify_model(CG, M, f, &nu);
        j = dense_model_json(M, &V);
      } else {
        j = dense_model_json(M, nullptr);
      }
      if (m_thr > 0) {
        auto T = threshold_set(M, m_thr);
        j["threshold_set"] = {{"epsilon", m_thr},
                              {"size", T.members.size()},
                              {"density", T.density},
                              {"predicted_floor", T.predicted_floor}};
      }
      if (m_conv == 2 || m_conv == 3) {
        double worst = 0.0;
        for (auto& c : convolution_compare_all(f, M, m_conv))
          worst = std::max(worst, std::abs(c.diff_times_phi));
        j["convolution_compare"] = {{"arity", m_conv}, {"max_abs_diff_times_phi", worst}};
      }
      sink.write(envelope(config_echo({{"command", "model"},
                                       {"q", m_q},
                                       {"N", m_N},
                                       {"delta", m_delta},
                                       {"epsilon", m_eps}}),
                          j));
      return 0;
    }

    if (*c_ek) {
      UnitGroup G(e_q);
      if (e_cap) {
        PrimeTable PT = PrimeTable::sieve(e_cap);
        auto n = min_N_for_complete(G, PT, e_k, e_cap);
        sink.write(envelope(
            config_echo({{"command", "ek"}, {"q", e_q}, {"k", e_k}, {"min_complete_cap", e_cap}}),
            json{{"min_N", n ? json(*n) : json()}}));
        return 0;
      }
      if (!e_N) e_N = e_q;
      PrimeTable PT = PrimeTable::sieve(std::max<std::uint64_t>(e_N, 3));
      auto r = compute_Ek(G, PT, e_N, e_k);
      json j;
      j["q"] = r.q;
      j["N"] = r.N;
      j["k"] = r.k;
      j["complete"] = r.complete();
      j["size"] = r.members.size();
      j["density"] = {{"num", r.density.num}, {"den", r.density.den}};
      if (!r.complete() && r.missing.size() <= 64) j["missing"] = r.missing.elements();
      sink.write(envelope(config_echo({{"command", "ek"}, {"q", e_q}, {"k", e_k}, {"N", e_N}}), j));
      return 0;
    }

    if (*c_camp) {
      camp.q_lo = static_cast<std::uint32_t>(camp_from);
      camp.q_hi = static_cast<std::uint32_t>(camp_to);
      camp.filter = camp_filter == "all"        ? CampaignFilter::all
                    : camp_filter == "cube_free" ? CampaignFilter::cube_free
                                                 : CampaignFilter::prime;
      camp.n_rule = camp_nrule == "q"     ? NRule::equal_q
                    : camp_nrule == "q1.2" ? NRule::q_pow_12
                                           : NRule::explicit_N;
      camp.explicit_n = camp_N;
      camp.task_e3 = camp_task.find("e3") != std::string::npos;
      camp.task_e2 = camp_task.find("e2") != std::string::npos;
      camp.task_exceptional = camp_task.find("exceptional") != std::string::npos;
      camp.threads = threads;
      auto rep = run_campaign(camp);
      if (format == "csv")
        sink.write(campaign_csv(rep));
      else
        sink.write(campaign_json(rep, timing));
      return 0;
    }

    if (*c_exc) {
      UnitGroup G(x_q);
      CharacterGroup CG(G);
      if (!x_primes) x_primes = x_q;
      std::uint64_t l1x = x_l1x ? x_l1x : std::max<std::uint64_t>(x_q, 100'000);
      PrimeTable PT = PrimeTable::sieve(std::max<std::uint64_t>({x_primes, x_q, std::uint64_t(3)}));
      json j = exceptional_scan_json(exceptional_scan(CG, PT, x_primes, l1x));
      if (x_pipeline) j["pipeline"] = exceptional_pipeline_json(exceptional_pipeline(CG, PT, l1x));
      sink.write(envelope(config_echo({{"command", "exceptional"}, {"q", x_q}}), j));
      return 0;
    }

    if (*c_bounds) {
      UnitGroup G(b_q);
      CharacterGroup CG(G);
      if (!b_N) b_N = static_cast<std::uint64_t>(std::pow(double(b_q), 1.5));
      PrimeTable PT = PrimeTable::sieve(std::max<std::uint64_t>({b_N, b_q, std::uint64_t(100)}));
      if (b_coset_stats) {
        auto subs = subgroups_of_index(G, b_Y);
        if (subs.empty()) throw std::domain_error("no subgroup of that index");
        auto stats = coset_prime_stats(subs[0], PT, 2, b_N);
        if (format == "csv") {
          sink.write(coset_stats_csv(G.q(), b_Y, stats));
        } else {
          json rows = json::array();
          for (std::size_t i = 0; i < stats.representatives.size(); ++i)
            rows.push_back({{"coset_rep", stats.representatives[i]},
                            {"count", stats.count[i]},
                            {"sum_log_p", stats.sum_log[i]},
                            {"sum_1_over_p", stats.sum_recip[i]},
                            {"sum_logp_over_p", stats.sum_log_over_p[i]}});
          sink.write(envelope(config_echo({{"command", "bounds"}, {"q", b_q}, {"Y", b_Y}}),
                              json{{"coset_prime_stats", rows}}));
        }
        return 0;
      }
      json j;
      // sieve function table
      json sf = json::array();
      for (double s : {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0}) {
        auto v = sieve_function(s);
        sf.push_back({{"s", s},
                      {"F0", v.F0 ? json(*v.F0) : json()},
                      {"f0", v.f0 ? json(*v.f0) : json()}});
      }
      j["sieve_functions"] = sf;
      // almost-prime coset counts against the lemma band
      auto subs = subgroups_of_index(G, b_Y);
      json ap = json::array();
      double theta0 = 1.0 - 0.05 - std::log(double(b_q)) / (4.0 * std::log(double(b_N)));
      for (auto& H : subs) {
        auto dec = cosets(H);
        json per = json::array();
        for (auto& c : dec.cosets) {
          auto cnt = almost_prime_coset_count(H, c.representative, b_N, PT);
          double scale = double(b_N) / (double(b_Y) * std::log(double(b_N)));
          per.push_back({{"coset", c.representative},
                         {"count", cnt},
                         {"lower_band", 2.0 * std::log(3.0 * theta0 - 1.0) / theta0 * scale},
                         {"upper_band", 2.0 / theta0 * scale}});
        }
        ap.push_back(per);
      }
      j["almost_prime_counts"] = {{"Y", b_Y}, {"N", b_N}, {"theta0", theta0}, {"subgroups", ap}};
      // realpart ratio
      auto rp = realpart_weighted_sum(CG.character(CG.size() > 1 ? 1 : 0), PT, b_alpha);
      j["realpart"] = {{"alpha", b_alpha},
                       {"value", rp.value},
                       {"principal", rp.principal_value},
                       {"prediction", rp.principal_prediction}};
      sink.write(envelope(config_echo({{"command", "bounds"}, {"q", b_q}, {"Y", b_Y}, {"N", b_N}}), j));
      return 0;
    }
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
