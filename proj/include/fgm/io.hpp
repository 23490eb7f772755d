#pragma once

#include <filesystem>
#include <string>

#include "fgm/basis.hpp"
#include "fgm/sampler.hpp"
#include "fgm/simgen.hpp"
#include "fgm/summaries.hpp"

namespace fgm::io {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// graph text format: first line `p`, then `i j` lines, 1-based, i < j
void write_graph(const std::filesystem::path& path, const DecomposableGraph& g);
DecomposableGraph read_graph(const std::filesystem::path& path);

// coefficient dataset: dense CSV (one row per sample) plus JSON sidecar with
// the block layout, c0, and provenance
void write_coefficients(const std::filesystem::path& csv_path,
                        const CoefficientDataset& data, const std::string& provenance);
CoefficientDataset read_coefficients(const std::filesystem::path& csv_path);

// functional data CSV, long format: sample_id,node_id,t,value (1-based ids)
void write_functional(const std::filesystem::path& path, const FunctionalDataset& data);
FunctionalDataset read_functional(const std::filesystem::path& path);

// dense matrix CSV with JSON sidecar carrying the block layout
void write_matrix(const std::filesystem::path& csv_path, const Eigen::MatrixXd& m,
                  const BlockLayout& layout);
Eigen::MatrixXd read_matrix(const std::filesystem::path& csv_path);

void write_matrix_plain(const std::filesystem::path& path, const Eigen::MatrixXd& m);

// trace: JSON lines, one record {sweep, edges, log_post, accepted} per
// retained sweep, preceded by a header record with p and the seed
void write_trace(const std::filesystem::path& path, const ChainTrace& trace);
ChainTrace read_trace(const std::filesystem::path& path);

// node metadata CSV: node_id,region[,mirror_id]
void write_metadata(const std::filesystem::path& path, const NodeMetadata& meta);
NodeMetadata read_metadata(const std::filesystem::path& path, int p);

void write_text(const std::filesystem::path& path, const std::string& text);

// run manifest: command, config snapshot, seed, paths, wall time
void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const std::string& config_json, std::uint64_t seed,
                    double wall_seconds);

// sim spec config: JSON object or flat `key = value` text; unknown keys are
// errors
SimSpec read_simspec(const std::filesystem::path& path);
std::string simspec_to_json(const SimSpec& spec);

}  // namespace fgm::io
