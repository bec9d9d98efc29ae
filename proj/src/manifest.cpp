#include "pcskel/manifest.hpp"

#include <json.hpp>

#include "pcskel/error.hpp"

namespace pcskel {

namespace {

template <typename T>
void put(nlohmann::json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

template <typename T>
void get(const nlohmann::json& j, const char* key, std::optional<T>& v) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) v = it->get<T>();
}

} // namespace

std::string to_json(const RunManifest& m) {
    nlohmann::json j;
    j["subcommand"] = m.subcommand;
    j["version"] = m.version;
    put(j, "alpha", m.alpha);
    put(j, "m_max", m.m_max);
    put(j, "seed", m.seed);
    put(j, "n", m.n);
    put(j, "p", m.p);
    put(j, "s", m.s);
    put(j, "replicates", m.replicates);
    put(j, "workers", m.workers);
    j["paths"] = m.paths;
    j["duration_seconds"] = m.duration_seconds;
    put(j, "m_reach", m.m_reach);
    put(j, "tests_performed", m.tests_performed);
    j["tests_per_level"] = m.tests_per_level;
    put(j, "degenerate_queries", m.degenerate_queries);
    return j.dump(2);
}

RunManifest manifest_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        if (!j.is_object()) throw InputError("manifest must be a JSON object");
        RunManifest m;
        m.subcommand = j.at("subcommand").get<std::string>();
        m.version = j.at("version").get<std::string>();
        get(j, "alpha", m.alpha);
        get(j, "m_max", m.m_max);
        get(j, "seed", m.seed);
        get(j, "n", m.n);
        get(j, "p", m.p);
        get(j, "s", m.s);
        get(j, "replicates", m.replicates);
        get(j, "workers", m.workers);
        if (auto it = j.find("paths"); it != j.end()) m.paths = it->get<std::map<std::string, std::string>>();
        m.duration_seconds = j.value("duration_seconds", 0.0);
        get(j, "m_reach", m.m_reach);
        get(j, "tests_performed", m.tests_performed);
        if (auto it = j.find("tests_per_level"); it != j.end())
            m.tests_per_level = it->get<std::vector<std::size_t>>();
        get(j, "degenerate_queries", m.degenerate_queries);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed manifest: ") + e.what());
    }
}

} // namespace pcskel
