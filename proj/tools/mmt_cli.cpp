// Command-line front end: corpus statistics, enrichment, masking, overlap
// statistics, vocabulary pruning, scoring, translator adapters and full
// experiments.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <mmt/corpus.hpp>
#include <mmt/degrade.hpp>
#include <mmt/enrich.hpp>
#include <mmt/metrics.hpp>
#include <mmt/runner/config.hpp>
#include <mmt/runner/experiment.hpp>
#include <mmt/runner/report.hpp>
#include <mmt/runner/translator.hpp>
#include <mmt/textproc.hpp>

namespace fs = std::filesystem;

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mmt::Error("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mmt::Error("cannot write file: " + path);
    return out;
}

mmt::Lexicon color_lexicon_or_default(const std::string& path) {
    return path.empty() ? mmt::default_color_lexicon() : mmt::load_lexicon(path, "colors");
}

// Annotates corpus sources with POS from a sidecar or lexicon pair.
std::vector<mmt::TokenSeq> annotate_sources(const std::vector<mmt::CaptionRecord>& records,
                                            const std::string& sidecar_path,
                                            const std::string& tag_map_path,
                                            const std::string& noun_path,
                                            const std::string& adj_path) {
    std::vector<mmt::TokenSeq> sources;
    sources.reserve(records.size());
    for (const auto& rec : records) sources.push_back(mmt::tokenize_en(rec.source_text));
    if (!sidecar_path.empty()) {
        auto tag_map =
            tag_map_path.empty() ? mmt::TagMap::universal() : mmt::load_tag_map(tag_map_path);
        auto sidecar = mmt::load_pos_sidecar(sidecar_path);
        if (sidecar.size() != sources.size())
            throw mmt::AlignmentError("sidecar has " + std::to_string(sidecar.size()) +
                                          " sentences for a corpus of " +
                                          std::to_string(sources.size()),
                                      sidecar.size());
        for (std::size_t i = 0; i < sources.size(); ++i)
            sources[i] = mmt::pos_annotate(sources[i], sidecar[i], i, tag_map);
        return sources;
    }
    if (!noun_path.empty() || !adj_path.empty()) {
        mmt::Lexicon nouns = noun_path.empty() ? mmt::Lexicon{"nouns", {}}
                                               : mmt::load_lexicon(noun_path, "nouns");
        mmt::Lexicon adjectives = adj_path.empty()
                                      ? mmt::Lexicon{"adjectives", {}}
                                      : mmt::load_lexicon(adj_path, "adjectives");
        for (auto& seq : sources) seq = mmt::pos_annotate(seq, nouns, adjectives);
        return sources;
    }
    throw mmt::Error("POS needed: pass --pos-sidecar or --noun-lexicon/--adjective-lexicon");
}

int run_stats(const std::vector<std::string>& corpora) {
    std::cout << "split\tpairs\tavg_src_tokens\tavg_tgt_tokens\n";
    for (const auto& path : corpora) {
        auto records = mmt::load_corpus(path);
        auto stats = mmt::corpus_stats(records);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%zu\t%.2f\t%.2f", stats.pair_count, stats.avg_src_tokens,
                      stats.avg_tgt_tokens);
        std::cout << fs::path(path).filename().string() << '\t' << buf << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multimodal MT degradation and evaluation harness"};
    app.require_subcommand(1);

    // --- stats ---------------------------------------------------------
    auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics per split");
    std::vector<std::string> stats_corpora;
    stats_cmd->add_option("corpus", stats_corpora, "hvg-tsv corpus files")->required();

    // --- enrich --------------------------------------------------------
    auto* enrich_cmd = app.add_subcommand("enrich", "Write tag-enriched source lines");
    std::string en_corpus, en_dets, en_gt, en_colors, en_out, en_variant = "vita";
    int en_top_k = 10;
    double en_min_overlap = 0.0;
    enrich_cmd->add_option("--corpus", en_corpus)->required();
    enrich_cmd->add_option("--detections", en_dets);
    enrich_cmd->add_option("--gt", en_gt, "ground-truth annotations file");
    enrich_cmd->add_option("--variant", en_variant,
                           "none|vita|vita-gt|vita-col|vita-gt-col|vita-adj|vita-gt-adj");
    enrich_cmd->add_option("--top-k", en_top_k, "tags per image");
    enrich_cmd->add_option("--min-overlap", en_min_overlap,
                           "intersection-over-object-area threshold for ground-truth objects");
    enrich_cmd->add_option("--color-lexicon", en_colors);
    enrich_cmd->add_option("--output", en_out, "output file (default stdout)");

    // --- mask ----------------------------------------------------------
    auto* mask_cmd = app.add_subcommand("mask", "Write degraded corpora, one file per fraction");
    std::string mk_corpus, mk_mode = "random", mk_symbol = "<mask>", mk_outdir = ".";
    std::string mk_sidecar, mk_tagmap, mk_nouns, mk_adjs, mk_colors;
    std::vector<double> mk_fractions;
    std::uint64_t mk_seed = 0;
    bool mk_enriched = false;
    mask_cmd->add_option("--corpus", mk_corpus, "hvg-tsv corpus, or plain text with --enriched")
        ->required();
    mask_cmd->add_flag("--enriched", mk_enriched,
                       "input is enriched plain text; only the sentence before ` ##` is masked");
    mask_cmd->add_option("--mode", mk_mode, "entity|color|adjective|random");
    mask_cmd->add_option("--fractions", mk_fractions, "ascending grid (default 0,0.1,...,1)");
    mask_cmd->add_option("--seed", mk_seed);
    mask_cmd->add_option("--mask-symbol", mk_symbol);
    mask_cmd->add_option("--pos-sidecar", mk_sidecar);
    mask_cmd->add_option("--tag-map", mk_tagmap);
    mask_cmd->add_option("--noun-lexicon", mk_nouns);
    mask_cmd->add_option("--adjective-lexicon", mk_adjs);
    mask_cmd->add_option("--color-lexicon", mk_colors);
    mask_cmd->add_option("--output-dir", mk_outdir);

    // --- overlap -------------------------------------------------------
    auto* overlap_cmd = app.add_subcommand("overlap", "Entity/object-tag overlap statistics");
    std::string ov_corpus, ov_dets, ov_sidecar, ov_tagmap, ov_nouns, ov_adjs;
    overlap_cmd->add_option("--corpus", ov_corpus)->required();
    overlap_cmd->add_option("--detections", ov_dets)->required();
    overlap_cmd->add_option("--pos-sidecar", ov_sidecar);
    overlap_cmd->add_option("--tag-map", ov_tagmap);
    overlap_cmd->add_option("--noun-lexicon", ov_nouns);
    overlap_cmd->add_option("--adjective-lexicon", ov_adjs);

    // --- prune-vocab ---------------------------------------------------
    auto* prune_cmd = app.add_subcommand("prune-vocab", "Drop vocab units unused by the corpora");
    std::string pv_vocab, pv_out;
    std::vector<std::string> pv_corpora, pv_specials;
    prune_cmd->add_option("--vocab", pv_vocab)->required();
    prune_cmd->add_option("corpora", pv_corpora, "text corpora (one sentence per line)")
        ->required();
    prune_cmd->add_option("--specials", pv_specials, "extra units always retained");
    prune_cmd->add_option("--output", pv_out, "output vocab file (default stdout)");

    // --- score ---------------------------------------------------------
    auto* score_cmd = app.add_subcommand("score", "Score a hypothesis file against references");
    std::string sc_hyp, sc_ref, sc_id = "corpus", sc_out, sc_amfm_train;
    std::vector<std::string> sc_metrics = {"bleu"};
    std::size_t sc_rank = 16;
    score_cmd->add_option("--hyp", sc_hyp)->required();
    score_cmd->add_option("--ref", sc_ref)->required();
    score_cmd->add_option("--metrics", sc_metrics, "bleu ribes amfm");
    score_cmd->add_option("--corpus-id", sc_id);
    score_cmd->add_option("--amfm-train", sc_amfm_train,
                          "training sentences for the AMFM models (default: the references)");
    score_cmd->add_option("--amfm-rank", sc_rank);
    score_cmd->add_option("--output", sc_out, "report file (default stdout)");

    // --- translate -----------------------------------------------------
    auto* translate_cmd = app.add_subcommand("translate", "Drive a translator over source lines");
    std::string tr_kind = "builtin-echo", tr_command, tr_path, tr_input, tr_out;
    int tr_batch = 32;
    double tr_timeout = 600.0;
    translate_cmd->add_option("--translator", tr_kind,
                              "external-command|hypothesis-file|builtin-echo|builtin-dictionary");
    translate_cmd->add_option("--command", tr_command, "shell command for external-command");
    translate_cmd->add_option("--path", tr_path, "hypothesis file or dictionary word table");
    translate_cmd->add_option("--input", tr_input, "source lines (default stdin)");
    translate_cmd->add_option("--batch-size", tr_batch);
    translate_cmd->add_option("--timeout", tr_timeout, "seconds per batch");
    translate_cmd->add_option("--output", tr_out, "hypothesis lines (default stdout)");

    // --- experiment ----------------------------------------------------
    auto* exp_cmd = app.add_subcommand("experiment", "Run a full degradation experiment");
    std::string ex_config, ex_outdir;
    std::vector<double> ex_fractions;
    std::optional<std::uint64_t> ex_seed;
    std::string ex_symbol;
    std::optional<int> ex_top_k;
    exp_cmd->add_option("--config", ex_config, "JSON experiment config")->required();
    exp_cmd->add_option("--seed", ex_seed, "override config seed");
    exp_cmd->add_option("--mask-symbol", ex_symbol, "override mask symbol");
    exp_cmd->add_option("--fractions", ex_fractions, "override fraction grid");
    exp_cmd->add_option("--top-k", ex_top_k, "override tags per image");
    exp_cmd->add_option("--output-dir", ex_outdir, "override output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*stats_cmd) return run_stats(stats_corpora);

        if (*enrich_cmd) {
            auto records = mmt::load_corpus(en_corpus);
            auto variant = mmt::enrich_variant_from_string(en_variant);
            std::map<std::string, mmt::DetectionSet> dets;
            std::map<std::string, mmt::GtAnnotationSet> gt;
            if (mmt::variant_needs_detections(variant)) {
                if (en_dets.empty()) throw mmt::Error("variant needs --detections");
                dets = mmt::load_detections(en_dets);
            }
            if (mmt::variant_needs_gt(variant)) {
                if (en_gt.empty()) throw mmt::Error("variant needs --gt");
                gt = mmt::load_gt_annotations(en_gt);
            }
            mmt::ExperimentConfig cfg;
            cfg.top_k = en_top_k;
            cfg.min_overlap = en_min_overlap;
            auto colors = color_lexicon_or_default(en_colors);
            auto tags = mmt::build_variant_tags(cfg, records, variant, dets, gt, colors);
            std::ofstream file;
            std::ostream* out = &std::cout;
            if (!en_out.empty()) {
                file = open_out(en_out);
                out = &file;
            }
            for (std::size_t i = 0; i < records.size(); ++i) {
                *out << (variant == mmt::EnrichVariant::None
                             ? records[i].source_text
                             : mmt::build_input(records[i].source_text, tags[i]))
                     << '\n';
            }
            return 0;
        }

        if (*mask_cmd) {
            auto mode = mmt::mask_mode_from_string(mk_mode);
            if (mk_fractions.empty()) mk_fractions = mmt::default_fraction_grid();
            auto colors = color_lexicon_or_default(mk_colors);
            bool needs_pos = mode == mmt::MaskMode::Entity || mode == mmt::MaskMode::Adjective;

            std::vector<mmt::TokenSeq> sources;
            std::vector<mmt::TagList> line_tags;  // per line when --enriched
            if (mk_enriched) {
                if (needs_pos)
                    throw mmt::Error(
                        "entity/adjective masking over enriched text needs the original corpus; "
                        "mask first, then enrich");
                for (const auto& line : read_lines(mk_corpus)) {
                    auto [sentence, tags] = mmt::parse_enriched(line);
                    sources.push_back(mmt::tokenize_en(sentence));
                    line_tags.push_back(std::move(tags));
                }
            } else {
                auto records = mmt::load_corpus(mk_corpus);
                if (needs_pos) {
                    sources = annotate_sources(records, mk_sidecar, mk_tagmap, mk_nouns, mk_adjs);
                } else {
                    for (const auto& rec : records)
                        sources.push_back(mmt::tokenize_en(rec.source_text));
                }
            }

            auto schedule = mmt::mask_schedule(sources, mode, mk_fractions, mk_seed, colors,
                                               mk_symbol);
            fs::create_directories(mk_outdir);
            std::vector<mmt::MaskManifestEntry> manifest;
            for (const auto& [fraction, corpus] : schedule) {
                char name[64];
                std::snprintf(name, sizeof name, "masked_%s_%.2f.txt", mk_mode.c_str(), fraction);
                auto out = open_out((fs::path(mk_outdir) / name).string());
                for (std::size_t i = 0; i < corpus.size(); ++i) {
                    std::string sentence = mmt::str::join(corpus[i].tokens, " ");
                    out << (mk_enriched ? mmt::build_input(sentence, line_tags[i]) : sentence)
                        << '\n';
                }
                manifest.push_back({name, mode, fraction, mk_seed, mk_symbol});
            }
            auto mf = open_out((fs::path(mk_outdir) / "manifest.json").string());
            mmt::write_mask_manifest(manifest, mf);
            return 0;
        }

        if (*overlap_cmd) {
            auto records = mmt::load_corpus(ov_corpus);
            auto annotated = annotate_sources(records, ov_sidecar, ov_tagmap, ov_nouns, ov_adjs);
            auto dets = mmt::load_detections(ov_dets);
            auto stats = mmt::overlap_stats(records, annotated, dets);
            std::cout << "entities_in_text\tobject_tags\tentities_in_tags\tpct_entities_in_tags\n";
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.2f", stats.pct_entities_in_tags);
            std::cout << stats.entities_in_text << '\t' << stats.object_tags << '\t'
                      << stats.entities_in_tags << '\t' << buf << '\n';
            return 0;
        }

        if (*prune_cmd) {
            auto vocab = mmt::load_vocab(pv_vocab);
            std::vector<std::vector<std::string>> corpora;
            for (const auto& path : pv_corpora) corpora.push_back(read_lines(path));
            auto pruned = mmt::prune_vocab(vocab, corpora, pv_specials);
            if (pv_out.empty()) {
                mmt::write_vocab(pruned, std::cout);
            } else {
                auto out = open_out(pv_out);
                mmt::write_vocab(pruned, out);
            }
            std::cerr << "kept " << pruned.units.size() << " of " << vocab.units.size()
                      << " units\n";
            return 0;
        }

        if (*score_cmd) {
            auto hyp_lines = read_lines(sc_hyp);
            auto ref_lines = read_lines(sc_ref);
            if (hyp_lines.size() != ref_lines.size())
                throw mmt::Error("hypothesis and reference line counts differ");
            std::vector<mmt::TokenSeq> hyps, refs;
            for (const auto& line : hyp_lines) hyps.push_back(mmt::tokenize_hi(line));
            for (const auto& line : ref_lines) refs.push_back(mmt::tokenize_hi(line));

            std::ofstream file;
            std::ostream* out = &std::cout;
            if (!sc_out.empty()) {
                file = open_out(sc_out);
                out = &file;
            }
            for (const auto& metric : sc_metrics) {
                if (metric == "bleu") {
                    auto b = mmt::bleu(hyps, refs);
                    mmt::write_score_record(*out, "bleu", sc_id, b.score,
                                            mmt::bleu_breakdown_json(b));
                } else if (metric == "ribes") {
                    mmt::write_score_record(*out, "ribes", sc_id, mmt::ribes_corpus(hyps, refs));
                } else if (metric == "amfm") {
                    std::vector<std::vector<std::string>> train;
                    if (sc_amfm_train.empty()) {
                        for (const auto& ref : refs) train.push_back(ref.tokens);
                    } else {
                        for (const auto& line : read_lines(sc_amfm_train))
                            train.push_back(mmt::tokenize_hi(line).tokens);
                    }
                    auto space = mmt::AmSpace::train(train, sc_rank);
                    auto lm = mmt::FmModel::train(train);
                    double sum = 0.0;
                    for (std::size_t i = 0; i < hyps.size(); ++i)
                        sum += mmt::amfm(hyps[i].tokens, refs[i].tokens, space, lm).score;
                    mmt::write_score_record(*out, "amfm", sc_id,
                                            sum / static_cast<double>(hyps.size()));
                } else {
                    throw mmt::Error("unknown metric: " + metric);
                }
            }
            return 0;
        }

        if (*translate_cmd) {
            mmt::TranslatorSpec spec;
            spec.kind = mmt::translator_kind_from_string(tr_kind);
            spec.command = tr_command;
            spec.path = tr_path;
            spec.batch_size = tr_batch;
            spec.timeout_seconds = tr_timeout;
            std::vector<std::string> sources;
            if (tr_input.empty()) {
                std::string line;
                while (std::getline(std::cin, line)) sources.push_back(line);
            } else {
                sources = read_lines(tr_input);
            }
            auto hyps = mmt::translate(spec, sources);
            if (tr_out.empty()) {
                for (const auto& h : hyps) std::cout << h << '\n';
            } else {
                auto out = open_out(tr_out);
                for (const auto& h : hyps) out << h << '\n';
            }
            return 0;
        }

        if (*exp_cmd) {
            auto config = mmt::load_experiment_config(ex_config);
            if (ex_seed) config.seed = *ex_seed;
            if (!ex_symbol.empty()) config.mask_symbol = ex_symbol;
            if (!ex_fractions.empty()) config.fractions = ex_fractions;
            if (ex_top_k) config.top_k = *ex_top_k;
            if (!ex_outdir.empty()) config.output_dir = ex_outdir;
            if (config.output_dir.empty()) config.output_dir = "experiment_out";
            auto report = mmt::run_experiment(config);
            mmt::emit_report(report, config.output_dir);
            for (const auto& failure : report.failures)
                std::cerr << "system " << failure.system << " failed: " << failure.message << '\n';
            std::cout << "wrote report.tsv, curves.tsv, report.json to " << config.output_dir
                      << '\n';
            return report.failures.empty() ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
