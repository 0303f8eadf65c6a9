#pragma once

#include <string>

#include <json.hpp>

#include "primeprod/characters.hpp"
#include "primeprod/prime_stats.hpp"
#include "primeprod/product_sets.hpp"
#include "primeprod/sieve_weights.hpp"
#include "primeprod/transference.hpp"
#include "primeprod/verifier.hpp"

namespace primeprod {

inline constexpr const char* kVersion = "0.1.0";

nlohmann::json group_json(const UnitGroup& G);

// CSV with columns q,cube_free,phi,e2_size,e2_density_num,e2_density_den,
// e3_complete,e3_missing_count -- byte-identical across runs with the same
// config.
std::string campaign_csv(const CampaignReport& rep);
nlohmann::json campaign_json(const CampaignReport& rep, bool include_timing);

nlohmann::json char_sum_profile_json(const CharSumProfile& prof);
std::string char_sum_profile_csv(const CharSumProfile& prof);  // q,char,N,re,im

std::string weight_dump_csv(const SieveWeightSet& W);  // d,lambda_plus,lambda_minus

std::string coset_stats_csv(std::uint32_t q, std::uint64_t Y, const CosetPrimeStats& stats);

nlohmann::json structure_report_json(std::uint32_t q, const StructureReport& rep);

nlohmann::json dense_model_json(const DenseModel& model, const ModelVerification* verification);

nlohmann::json exceptional_pipeline_json(const ExceptionalPipelineReport& rep);
nlohmann::json exceptional_scan_json(const ExceptionalScanReport& rep);

nlohmann::json burgess_report_json(std::uint32_t q, const BurgessDecayReport& rep);

// fixed-format double rendering for CSV (deterministic, round-trippable)
std::string csv_double(double x);

}  // namespace primeprod
