#pragma once

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "mmt/error.hpp"
#include "mmt/runner/experiment.hpp"

namespace mmt {

// Experiment config file: a single JSON object. See the README for the full
// schema; unknown keys are rejected to catch typos.
inline ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
    static const std::set<std::string> known{
        "corpus",         "detections",  "ground_truth",     "pos_sidecar",
        "tag_map",        "noun_lexicon", "adjective_lexicon", "color_lexicon",
        "systems",        "degradation", "mask_symbol",      "top_k",
        "min_overlap",    "metrics",     "amfm_rank",        "output_dir"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (known.count(key) == 0) throw Error("config: unknown key `" + key + "`");
    }
    ExperimentConfig config;
    auto get_string = [&](const char* key, std::string& into) {
        if (j.contains(key)) {
            if (!j[key].is_string()) throw Error(std::string("config: `") + key + "` must be a string");
            into = j[key].get<std::string>();
        }
    };
    get_string("corpus", config.corpus_path);
    get_string("detections", config.detections_path);
    get_string("ground_truth", config.gt_path);
    get_string("pos_sidecar", config.pos_sidecar_path);
    get_string("tag_map", config.tag_map_path);
    get_string("noun_lexicon", config.noun_lexicon_path);
    get_string("adjective_lexicon", config.adjective_lexicon_path);
    get_string("color_lexicon", config.color_lexicon_path);
    get_string("mask_symbol", config.mask_symbol);
    get_string("output_dir", config.output_dir);
    if (config.corpus_path.empty()) throw Error("config: `corpus` is required");

    if (!j.contains("systems") || !j["systems"].is_array() || j["systems"].empty())
        throw Error("config: `systems` must be a non-empty array");
    for (const auto& js : j["systems"]) {
        SystemSpec sys;
        if (!js.contains("name") || !js["name"].is_string())
            throw Error("config: each system needs a string `name`");
        sys.name = js["name"].get<std::string>();
        if (js.contains("variant")) sys.variant = enrich_variant_from_string(js["variant"].get<std::string>());
        if (!js.contains("translator") || !js["translator"].is_object())
            throw Error("config: system `" + sys.name + "` needs a `translator` object");
        const auto& jt = js["translator"];
        if (!jt.contains("kind") || !jt["kind"].is_string())
            throw Error("config: translator needs a string `kind`");
        sys.translator.kind = translator_kind_from_string(jt["kind"].get<std::string>());
        if (jt.contains("command")) sys.translator.command = jt["command"].get<std::string>();
        if (jt.contains("path")) sys.translator.path = jt["path"].get<std::string>();
        if (jt.contains("batch_size")) sys.translator.batch_size = jt["batch_size"].get<int>();
        if (jt.contains("timeout_seconds"))
            sys.translator.timeout_seconds = jt["timeout_seconds"].get<double>();
        if (sys.translator.batch_size < 1)
            throw Error("config: translator batch_size must be >= 1");
        if (sys.translator.kind == TranslatorKind::ExternalCommand &&
            sys.translator.command.empty())
            throw Error("config: external-command translator needs a `command`");
        config.systems.push_back(std::move(sys));
    }

    if (j.contains("degradation")) {
        const auto& jd = j["degradation"];
        if (jd.contains("mode")) config.mode = mask_mode_from_string(jd["mode"].get<std::string>());
        if (jd.contains("fractions")) {
            config.fractions.clear();
            for (const auto& f : jd["fractions"]) config.fractions.push_back(f.get<double>());
        }
        if (jd.contains("seed")) config.seed = jd["seed"].get<std::uint64_t>();
    }
    if (j.contains("top_k")) config.top_k = j["top_k"].get<int>();
    if (j.contains("min_overlap")) config.min_overlap = j["min_overlap"].get<double>();
    if (j.contains("amfm_rank")) config.amfm_rank = j["amfm_rank"].get<std::size_t>();
    if (j.contains("metrics")) {
        for (const auto& m : j["metrics"]) {
            std::string name = m.get<std::string>();
            if (name == "bleu") continue;  // always computed
            if (name == "ribes") config.compute_ribes = true;
            else if (name == "amfm") config.compute_amfm = true;
            else throw Error("config: unknown metric `" + name + "`");
        }
    }
    return config;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("config: invalid JSON in " + path + ": " + e.what());
    }
    return parse_experiment_config(j);
}

}  // namespace mmt
