#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pcskel {

/// Record of one CLI invocation, serialized as a single JSON object.
struct RunManifest {
    std::string subcommand;
    std::string version;
    std::optional<double> alpha;
    std::optional<long> m_max;
    std::optional<std::uint64_t> seed;
    std::optional<long> n;
    std::optional<long> p;
    std::optional<double> s;
    std::optional<std::size_t> replicates;
    std::optional<unsigned> workers;
    std::map<std::string, std::string> paths;
    double duration_seconds = 0.0;
    std::optional<long> m_reach;
    std::optional<std::size_t> tests_performed;
    std::vector<std::size_t> tests_per_level;
    std::optional<std::size_t> degenerate_queries;

    bool operator==(const RunManifest&) const = default;
};

std::string to_json(const RunManifest& m);
/// Throws InputError on malformed JSON or wrongly typed fields.
RunManifest manifest_from_json(const std::string& text);

} // namespace pcskel
