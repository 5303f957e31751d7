#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "mathdup/error.hpp"
#include "mathdup/service.hpp"

namespace mathdup::service {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw MalformedInput(where + ": expected object");
    for (const auto& [k, v] : j.items()) {
        if (!allowed.contains(k)) throw MalformedInput(where + ": unknown key '" + k + "'");
    }
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw MalformedInput(where + ": expected number");
    return v.get<double>();
}

std::size_t positive(const json& v, const std::string& where) {
    if (!v.is_number_integer() || v.get<long long>() < 1) throw MalformedInput(where + ": expected integer >= 1");
    return v.get<std::size_t>();
}

std::uint64_t seed_value(const json& v) {
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0)) return v.get<std::uint64_t>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        char* end = nullptr;
        const auto x = std::strtoull(s.c_str(), &end, 0);
        if (!s.empty() && end && *end == '\0') return x;
    }
    throw MalformedInput("hash_seed: expected unsigned integer or \"0x...\" string");
}

ChannelThreshold& channel(Thresholds& t, const std::string& name) {
    if (name == "text") return t.text;
    if (name == "math") return t.math;
    if (name == "cite") return t.cite;
    throw InvalidThresholds("unknown channel '" + name + "'");
}

}  // namespace

json thresholds_to_json(const Thresholds& t) {
    auto ch = [](const ChannelThreshold& c) { return json{{"warning", c.warning}, {"suspicious", c.suspicious}}; };
    return json{{"text", ch(t.text)}, {"math", ch(t.math)}, {"cite", ch(t.cite)}};
}

Thresholds update_thresholds(const Thresholds& current, const json& patch) {
    if (!patch.is_object()) throw InvalidThresholds("expected object of channels");
    Thresholds t = current;
    for (const auto& [name, v] : patch.items()) {
        auto& c = channel(t, name);
        if (!v.is_object()) throw InvalidThresholds(name + ": expected {warning, suspicious}");
        std::optional<double> w, s;
        for (const auto& [k, x] : v.items()) {
            if (!x.is_number()) throw InvalidThresholds(name + "." + k + ": expected number");
            if (k == "warning") w = x.get<double>();
            else if (k == "suspicious") s = x.get<double>();
            else throw InvalidThresholds(name + ": unknown key '" + k + "'");
        }
        for (auto b : {w, s}) {
            if (b && !(*b >= 0.0 && *b <= 1.0)) throw InvalidThresholds(name + ": value outside [0, 1]");
        }
        if (w && s) {
            c = {*w, *s};
        } else if (w) {
            c.warning = *w;
            if (c.suspicious < *w) c.suspicious = *w;
        } else if (s) {
            c.suspicious = *s;
            if (c.warning > *s) c.warning = *s;
        }
    }
    detect::validate(t);
    return t;
}

ServiceConfig config_from_json(const json& j) {
    check_keys(j, {"ngram", "window", "hash_seed", "cite_tolerance", "thresholds", "weights", "scan_k"}, "config");
    ServiceConfig cfg;
    auto& d = cfg.detect;
    if (j.contains("ngram")) d.text.ngram = positive(j["ngram"], "ngram");
    if (j.contains("window")) d.text.window = positive(j["window"], "window");
    if (j.contains("hash_seed")) d.text.hash_seed = seed_value(j["hash_seed"]);
    if (j.contains("cite_tolerance")) {
        d.cite_tolerance = number(j["cite_tolerance"], "cite_tolerance");
        if (d.cite_tolerance < 0.0 || d.cite_tolerance > 1.0) throw MalformedInput("cite_tolerance: outside [0, 1]");
    }
    if (j.contains("thresholds")) d.thresholds = update_thresholds(d.thresholds, j["thresholds"]);
    if (j.contains("weights")) {
        const auto& w = j["weights"];
        check_keys(w, {"text", "math", "cite", "text_floor", "math_floor", "cite_floor"}, "weights");
        auto set = [&](const char* key, double& out) {
            if (!w.contains(key)) return;
            out = number(w[key], std::string("weights.") + key);
            if (out < 0.0) throw MalformedInput(std::string("weights.") + key + ": negative");
        };
        set("text", d.weights.text);
        set("math", d.weights.math);
        set("cite", d.weights.cite);
        set("text_floor", d.weights.text_floor);
        set("math_floor", d.weights.math_floor);
        set("cite_floor", d.weights.cite_floor);
    }
    if (j.contains("scan_k")) cfg.scan_k = positive(j["scan_k"], "scan_k");
    return cfg;
}

json config_to_json(const ServiceConfig& cfg) {
    const auto& d = cfg.detect;
    char seed[24];
    std::snprintf(seed, sizeof seed, "0x%016llx", static_cast<unsigned long long>(d.text.hash_seed));
    return json{{"ngram", d.text.ngram},
                {"window", d.text.window},
                {"hash_seed", seed},
                {"cite_tolerance", d.cite_tolerance},
                {"thresholds", thresholds_to_json(d.thresholds)},
                {"weights",
                 {{"text", d.weights.text},
                  {"math", d.weights.math},
                  {"cite", d.weights.cite},
                  {"text_floor", d.weights.text_floor},
                  {"math_floor", d.weights.math_floor},
                  {"cite_floor", d.weights.cite_floor}}},
                {"scan_k", cfg.scan_k}};
}

ServiceConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput(path.string() + ": cannot open config");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw MalformedInput(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

}  // namespace mathdup::service
