#pragma once

#include <stdexcept>
#include <string>

#include "brinkhom/brinkman.hpp"
#include "brinkhom/cloud.hpp"
#include "brinkhom/covering.hpp"
#include "brinkhom/homogenize.hpp"

namespace brinkhom {

/// Raised on unreadable or schema-invalid input files.
struct MalformedInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Canonical float formatting (17 significant digits); serialization uses it
/// everywhere so write -> read -> write round-trips byte-identically.
std::string format_double(double v);

std::string cloud_to_json(const ParticleCloud& cloud);
ParticleCloud cloud_from_json(const std::string& text);

void write_cloud(const ParticleCloud& cloud, const std::string& path);
ParticleCloud read_cloud(const std::string& path);

std::string report_to_json(const DilutionReport& rep);
void write_report(const DilutionReport& rep, const std::string& path);

std::string covering_to_json(const CubeCovering& cov);
void write_covering(const CubeCovering& cov, const std::string& path);

/// Cell-center CSV (i, j, k, x, y, z, ux, uy, uz, p) plus a JSON sidecar with
/// the grid metadata and residuals.
void write_brinkman_csv(const MacField& fld, const std::string& csv_path,
                        const std::string& sidecar_path);

std::string experiment_csv_header();
std::string experiment_csv_row(const WeakFormReport& rep);
void write_experiment_csv(const std::vector<WeakFormReport>& reports, const std::string& path);

}  // namespace brinkhom
