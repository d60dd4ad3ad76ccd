#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmt/corpus.hpp"
#include "mmt/degrade.hpp"
#include "mmt/enrich.hpp"
#include "mmt/error.hpp"
#include "mmt/metrics.hpp"
#include "mmt/runner/translator.hpp"
#include "mmt/strings.hpp"
#include "mmt/textproc.hpp"

namespace mmt {

// How a system's source lines are enriched before translation.
enum class EnrichVariant { None, Vita, VitaGt, VitaCol, VitaGtCol, VitaAdj, VitaGtAdj };

inline EnrichVariant enrich_variant_from_string(std::string_view name) {
    if (name == "none") return EnrichVariant::None;
    if (name == "vita") return EnrichVariant::Vita;
    if (name == "vita-gt") return EnrichVariant::VitaGt;
    if (name == "vita-col") return EnrichVariant::VitaCol;
    if (name == "vita-gt-col") return EnrichVariant::VitaGtCol;
    if (name == "vita-adj") return EnrichVariant::VitaAdj;
    if (name == "vita-gt-adj") return EnrichVariant::VitaGtAdj;
    throw Error("unknown enrichment variant: " + std::string(name));
}

inline std::string to_string(EnrichVariant v) {
    switch (v) {
        case EnrichVariant::None: return "none";
        case EnrichVariant::Vita: return "vita";
        case EnrichVariant::VitaGt: return "vita-gt";
        case EnrichVariant::VitaCol: return "vita-col";
        case EnrichVariant::VitaGtCol: return "vita-gt-col";
        case EnrichVariant::VitaAdj: return "vita-adj";
        case EnrichVariant::VitaGtAdj: return "vita-gt-adj";
    }
    return "none";
}

inline bool variant_needs_detections(EnrichVariant v) {
    return v == EnrichVariant::Vita || v == EnrichVariant::VitaCol || v == EnrichVariant::VitaAdj;
}

inline bool variant_needs_gt(EnrichVariant v) {
    return v == EnrichVariant::VitaGt || v == EnrichVariant::VitaCol ||
           v == EnrichVariant::VitaGtCol || v == EnrichVariant::VitaAdj ||
           v == EnrichVariant::VitaGtAdj;
}

struct SystemSpec {
    std::string name;
    TranslatorSpec translator;
    EnrichVariant variant = EnrichVariant::None;
};

struct ExperimentConfig {
    std::string corpus_path;
    std::string detections_path;
    std::string gt_path;
    std::string pos_sidecar_path;
    std::string tag_map_path;
    std::string noun_lexicon_path;
    std::string adjective_lexicon_path;
    std::string color_lexicon_path;

    std::vector<SystemSpec> systems;

    MaskMode mode = MaskMode::Random;
    std::vector<double> fractions = default_fraction_grid();
    std::uint64_t seed = 0;
    std::string mask_symbol = "<mask>";

    int top_k = 10;
    double min_overlap = 0.0;

    bool compute_ribes = false;
    bool compute_amfm = false;
    std::size_t amfm_rank = 16;

    std::string output_dir;
};

struct ExperimentRow {
    std::string system;
    MaskMode mode;
    double fraction;
    double bleu;
    std::optional<double> ribes;
    std::optional<double> amfm;
};

struct SystemSummary {
    std::string system;
    DegradationRow degradation;
};

struct SystemFailure {
    std::string system;
    std::string message;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;
    std::vector<SystemSummary> summaries;
    std::vector<SystemFailure> failures;
};

// Per-record tag lists for one enrichment variant. Records whose image has
// no detections/annotations entry get an empty tag list.
inline std::vector<TagList> build_variant_tags(const ExperimentConfig& config,
                                               const std::vector<CaptionRecord>& records,
                                               EnrichVariant variant,
                                               const std::map<std::string, DetectionSet>& detections,
                                               const std::map<std::string, GtAnnotationSet>& gt,
                                               const Lexicon& colors) {
    std::vector<TagList> tags(records.size());
    if (variant == EnrichVariant::None) return tags;
    static const GtAnnotationSet kNoGt{};
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        TagList base;
        if (variant_needs_detections(variant)) {
            auto it = detections.find(rec.image_id);
            if (it != detections.end())
                base = select_tags(it->second, static_cast<std::size_t>(config.top_k));
        } else {
            auto it = gt.find(rec.image_id);
            if (it != gt.end()) base = filter_gt_objects(it->second, rec.region, config.min_overlap);
        }
        const GtAnnotationSet* ann = &kNoGt;
        if (auto it = gt.find(rec.image_id); it != gt.end()) ann = &it->second;
        switch (variant) {
            case EnrichVariant::VitaCol:
            case EnrichVariant::VitaGtCol:
                tags[i] = attach_attributes(base, *ann, attr_filter_from_lexicon(colors));
                break;
            case EnrichVariant::VitaAdj:
            case EnrichVariant::VitaGtAdj:
                tags[i] = attach_attributes(base, *ann, attr_filter_accept_all());
                break;
            default:
                tags[i] = std::move(base);
                break;
        }
    }
    return tags;
}

// Runs every system over the fraction grid: degrade the sentence, append
// tags, translate, score. All randomness derives from config.seed; a fixed
// config gives a byte-identical report. A translate failure aborts that
// system's run, is recorded, and the remaining systems still run.
inline ExperimentReport run_experiment(const ExperimentConfig& config) {
    if (config.systems.empty()) throw Error("experiment: no systems configured");
    {
        std::map<std::string, int> seen;
        for (const auto& sys : config.systems)
            if (++seen[sys.name] > 1) throw Error("experiment: duplicate system name: " + sys.name);
    }

    auto records = load_corpus(config.corpus_path);
    if (records.empty()) throw Error("experiment: empty corpus");

    bool needs_dets = false, needs_gt = false;
    for (const auto& sys : config.systems) {
        needs_dets = needs_dets || variant_needs_detections(sys.variant);
        needs_gt = needs_gt || variant_needs_gt(sys.variant);
    }
    std::map<std::string, DetectionSet> detections;
    if (needs_dets) {
        if (config.detections_path.empty())
            throw Error("experiment: a configured variant needs a detections file");
        detections = load_detections(config.detections_path);
    }
    std::map<std::string, GtAnnotationSet> gt;
    if (needs_gt) {
        if (config.gt_path.empty())
            throw Error("experiment: a configured variant needs a ground-truth file");
        gt = load_gt_annotations(config.gt_path);
    }
    Lexicon colors = config.color_lexicon_path.empty() ? default_color_lexicon()
                                                       : load_lexicon(config.color_lexicon_path);

    // Tokenize sources; POS when the mask mode needs it.
    std::vector<TokenSeq> sources;
    sources.reserve(records.size());
    for (const auto& rec : records) sources.push_back(tokenize_en(rec.source_text));
    bool needs_pos = config.mode == MaskMode::Entity || config.mode == MaskMode::Adjective;
    if (needs_pos) {
        if (!config.pos_sidecar_path.empty()) {
            TagMap tag_map = config.tag_map_path.empty() ? TagMap::universal()
                                                         : load_tag_map(config.tag_map_path);
            auto sidecar = load_pos_sidecar(config.pos_sidecar_path);
            if (sidecar.size() != sources.size())
                throw AlignmentError("sidecar has " + std::to_string(sidecar.size()) +
                                         " sentences for a corpus of " +
                                         std::to_string(sources.size()),
                                     sidecar.size());
            for (std::size_t i = 0; i < sources.size(); ++i)
                sources[i] = pos_annotate(sources[i], sidecar[i], i, tag_map);
        } else if (!config.noun_lexicon_path.empty() || !config.adjective_lexicon_path.empty()) {
            Lexicon nouns = config.noun_lexicon_path.empty()
                                ? Lexicon{"nouns", {}}
                                : load_lexicon(config.noun_lexicon_path, "nouns");
            Lexicon adjectives = config.adjective_lexicon_path.empty()
                                     ? Lexicon{"adjectives", {}}
                                     : load_lexicon(config.adjective_lexicon_path, "adjectives");
            for (auto& seq : sources) seq = pos_annotate(seq, nouns, adjectives);
        } else {
            throw Error("experiment: " + to_string(config.mode) +
                        " masking needs a POS sidecar or noun/adjective lexicons");
        }
    }

    std::vector<TokenSeq> references;
    references.reserve(records.size());
    for (const auto& rec : records) references.push_back(tokenize_hi(rec.target_text));

    AmSpace am_space;
    FmModel fm_model;
    if (config.compute_amfm) {
        std::vector<std::vector<std::string>> ref_tokens;
        ref_tokens.reserve(references.size());
        for (const auto& ref : references) ref_tokens.push_back(ref.tokens);
        am_space = AmSpace::train(ref_tokens, config.amfm_rank);
        fm_model = FmModel::train(ref_tokens);
    }

    auto degraded = mask_schedule(sources, config.mode, config.fractions, config.seed, colors,
                                  config.mask_symbol);

    ExperimentReport report;
    for (const auto& sys : config.systems) {
        auto tags = build_variant_tags(config, records, sys.variant, detections, gt, colors);
        std::vector<ExperimentRow> sys_rows;
        try {
            for (const auto& [fraction, corpus] : degraded) {
                std::vector<std::string> lines;
                lines.reserve(corpus.size());
                for (std::size_t i = 0; i < corpus.size(); ++i) {
                    std::string sentence = str::join(corpus[i].tokens, " ");
                    lines.push_back(sys.variant == EnrichVariant::None
                                        ? sentence
                                        : build_input(sentence, tags[i]));
                }
                auto hypotheses = translate(sys.translator, lines);
                std::vector<TokenSeq> hyp_tokens;
                hyp_tokens.reserve(hypotheses.size());
                for (const auto& hyp : hypotheses) hyp_tokens.push_back(tokenize_hi(hyp));

                ExperimentRow row;
                row.system = sys.name;
                row.mode = config.mode;
                row.fraction = fraction;
                row.bleu = bleu(hyp_tokens, references).score;
                if (config.compute_ribes) row.ribes = ribes_corpus(hyp_tokens, references);
                if (config.compute_amfm) {
                    double sum = 0.0;
                    for (std::size_t i = 0; i < hyp_tokens.size(); ++i)
                        sum += amfm(hyp_tokens[i].tokens, references[i].tokens, am_space, fm_model)
                                   .score;
                    row.amfm = sum / static_cast<double>(hyp_tokens.size());
                }
                sys_rows.push_back(std::move(row));
            }
        } catch (const Error& e) {
            report.failures.push_back({sys.name, e.what()});
            continue;
        }
        if (!sys_rows.empty()) {
            SystemSummary summary;
            summary.system = sys.name;
            summary.degradation.base_bleu = sys_rows.front().bleu;
            summary.degradation.degraded_bleu = sys_rows.back().bleu;
            summary.degradation.degradation_pct =
                summary.degradation.base_bleu > 0.0
                    ? degradation_pct(summary.degradation.base_bleu,
                                      summary.degradation.degraded_bleu)
                    : 0.0;
            report.summaries.push_back(std::move(summary));
        }
        for (auto& row : sys_rows) report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace mmt
