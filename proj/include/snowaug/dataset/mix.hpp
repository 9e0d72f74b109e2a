#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "snowaug/dataset/dataset.hpp"
#include "snowaug/synthesis/config.hpp"

namespace snowaug {

struct MixPolicy {
    double p_synthetic = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class Branch { Original, Synthetic, Failed };
std::string_view branch_name(Branch branch) noexcept;

struct ManifestRecord {
    std::size_t index = 0;
    std::string source;
    std::string output;
    Branch branch = Branch::Original;
    /// Seed of the item's synthesis stream.
    std::uint64_t seed = 0;
    std::string error;
};

struct Manifest {
    static constexpr int kSchemaVersion = 1;

    std::string config_digest;
    std::uint64_t master_seed = 0;
    double p_synthetic = 0.0;
    std::vector<ManifestRecord> records;

    std::size_t count(Branch branch) const;
    nlohmann::json to_json() const;
};

struct MixOptions {
    AnnotationFormat format = AnnotationFormat::Yolo;
    std::size_t workers = 1;
};

/// Stable digest of everything that shapes the output images.
std::string config_digest(const SnowConfig& snow, const MixPolicy& policy);

/// Per-item Bernoulli(p_synthetic) draw from the item's own stream.
bool choose_synthetic(const MixPolicy& policy, std::size_t index);

/// Emits the mixed set under `out` (images/, labels or annotations.jsonl,
/// manifest.json). Per-item failures are recorded, not thrown.
Manifest mix_datasets(const std::vector<DatasetItem>& items, const SnowConfig& snow, const MixPolicy& policy,
                      const std::filesystem::path& out, const MixOptions& options = {});

}  // namespace snowaug
