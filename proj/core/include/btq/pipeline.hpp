#pragma once

#include "btq/euler.hpp"

#include <iosfwd>

namespace btq {

struct RunConfig {
    int n = 1;
    int q = 2;
    std::string level = "full";
    int radius = 8;
    int support_radius = -1; // default: radius - 3
    int l = 1;
    int precision = -1; // default: radius + n + 5
    std::string out_dir;
    int workers = 0; // 0 = hardware concurrency
    unsigned seed = 1;
    bool emit_dot = false;

    GroupSpec group() const;
    int effective_support_radius() const { return support_radius >= 0 ? support_radius : radius - 3; }
    int effective_precision() const { return precision >= 0 ? precision : radius + n + 5; }
    void validate() const; // throws ConfigError

    std::string to_json() const;
    std::string config_hash() const;
    static RunConfig from_json(const std::string& text);
};

// parse "full" or a monic polynomial like "t", "t^2+t+1", "t^2+2"
Poly parse_level(const std::string& text, const FqCtx& F);

struct RunArtifacts {
    RunConfig config;
    QuotientComplex quotient;
    CohomologyReport report;
    std::vector<CuspClass> cusps;
    std::vector<std::vector<int>> depths;
    TruncationComplex truncation;
    StabilizationReport stabilization;
    SupportLocus locus;
    FundamentalPatch patch;
    long long chi_geometric = 0;
    long long chi_cohomological = 0;

    std::string summary_json() const;
};

// build -> quotient -> harmonic -> cusps -> euler
RunArtifacts run_pipeline(const RunConfig& cfg);

// write quotient.txt, cohomology.json, cusps.json, truncation.json,
// euler.json, patch.txt and run.json under the directory
void write_reports(const RunArtifacts& art, const std::string& dir);

struct VerifyResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// the aggregated invariant suites; failures are data, not exceptions
std::vector<VerifyResult> run_verify(const RunConfig& cfg, const QuotientComplex* loaded = nullptr);

// graph export of an n = 1 quotient
std::string quotient_dot(const QuotientComplex& Q);

// inverse of QuotientComplex::serialize (certificates are not restored)
QuotientComplex parse_quotient(const std::string& text);

} // namespace btq
