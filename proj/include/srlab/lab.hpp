#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "srlab/io.hpp"

namespace srlab::lab {

// Constant build identifier stamped into every report.
std::string version();

// 64-bit FNV-1a of a text blob, as fixed-width hex; used to fingerprint
// the canonical config text in reports.
std::string fnv1a_hex(const std::string& text);

// Declarative experiment description, loadable from key-value text.
struct ExperimentConfig {
    std::string structure = "heisenberg";  // catalogue name
    std::string structure_file;            // definition file, overrides the name
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> endpoints;
    int grid = 256;
    int restarts = 4;
    std::uint64_t seed = 1;

    std::vector<double> p_list{2.0};  // modulus norms
    double alpha = 0.5;               // Holder exponent for the estimators

    double q = 2.0, r = 2.0;                 // primal/dual exponent pair
    std::vector<double> M_list{0.25, 1.0, 4.0};
    std::string regime = "W";                // W or G
    double zeta = 0.0;                       // 0 -> derived from regime and step

    std::string phi_family = "random";  // hat | sine | random
    int phi_count = 8;
    int component = 0;                  // varied control component (zero-based)
    double lambda_lo = 1e-3, lambda_hi = 1e-1;

    int fourier_max_mode = 0;  // 0 -> grid/2 - 1
    std::vector<double> alpha_list{0.4, 0.6};  // weighted-sum exponents
    std::vector<double> gamma_list{1.0, 2.0};  // coefficient-norm indices

    std::string out_dir = "lab-out";

    static ExperimentConfig from_kv(const io::KVFile& kv);
    static ExperimentConfig from_file(const std::string& path);

    // Deterministic serialization of every field; its hash identifies the
    // run in reports.
    std::string canonical_text() const;
};

// One verified statement: a measured quantity against its expected value
// and tolerance. `anchor` names the property the check instantiates (a
// stable identifier shared between the runner and the verification suite).
struct CheckRecord {
    std::string name;
    std::string anchor;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct VerdictBundle {
    std::string code_version;
    std::string config_hash;
    std::vector<CheckRecord> checks;

    bool all_pass() const;
};

// Solve -> analyze -> verify pipeline over every endpoint pair in the
// config, parallel across pairs; per-pair artifacts (trajectory files,
// CSV tables) land under out_dir, stage failures become failing records
// rather than aborting the run.
VerdictBundle run_experiment(const ExperimentConfig& cfg);

enum class Suite { smoke, full };

// The acceptance gate: runs every criterion of the verification suite
// (reduced instance counts for smoke) and returns one record per check.
// When out_dir is nonempty the bundle is also written there as JSON.
VerdictBundle verify_all(Suite suite, std::uint64_t seed = 1,
                         const std::string& out_dir = "");

void write_bundle_json(const VerdictBundle& b, const std::string& path);

// One "PASS/FAIL name measured ... expected ..." line per record.
std::string bundle_summary(const VerdictBundle& b);

} // namespace srlab::lab
