#include <doctest.h>

#include <algorithm>

#include <mmt/enrich.hpp>
#include <mmt/rng.hpp>

using namespace mmt;

namespace {

DetectionSet make_dets(std::vector<std::pair<std::string, double>> labeled_scores) {
    DetectionSet set;
    set.image_id = "img";
    for (auto& [label, score] : labeled_scores)
        set.detections.push_back({label, score, Box{0, 0, 1, 1}});
    return set;
}

}  // namespace

TEST_CASE("select_tags takes the top ten by score") {
    std::vector<std::pair<std::string, double>> dets;
    for (int i = 0; i < 12; ++i)
        dets.emplace_back("obj" + std::to_string(i), 0.30 + 0.05 * i);
    auto tags = select_tags(make_dets(dets));
    REQUIRE(tags.tags.size() == 10);
    // Highest score is obj11, descending from there.
    CHECK(tags.tags.front() == "obj11");
    CHECK(tags.tags.back() == "obj2");
}

TEST_CASE("equal scores preserve input order") {
    auto tags = select_tags(make_dets({{"first", 0.5}, {"second", 0.5}, {"top", 0.9}}), 3);
    CHECK(tags.tags == std::vector<std::string>{"top", "first", "second"});
}

TEST_CASE("select_tags edge cases") {
    CHECK(select_tags(make_dets({})).tags.empty());
    CHECK(select_tags(make_dets({{"a", 0.1}}), 0).tags.empty());
    // Duplicate labels are retained.
    auto dup = select_tags(make_dets({{"cat", 0.9}, {"cat", 0.8}}), 10);
    CHECK(dup.tags == std::vector<std::string>{"cat", "cat"});
}

TEST_CASE("select_tags size and multiset properties") {
    mmt::SmallRng rng(31337);
    for (int trial = 0; trial < 200; ++trial) {
        // Injective labels so each tag maps back to exactly one score.
        std::vector<std::pair<std::string, double>> dets;
        std::size_t n = rng.below(15);
        for (std::size_t i = 0; i < n; ++i)
            dets.emplace_back("d" + std::to_string(i),
                              static_cast<double>(rng.below(101)) / 100.0);
        std::size_t k = rng.below(13);
        auto set = make_dets(dets);
        auto tags = select_tags(set, k);
        REQUIRE(tags.tags.size() == std::min(k, n));
        // The multiset of selected scores is exactly the top-k by score.
        std::vector<double> all_scores, selected_scores;
        for (const auto& d : set.detections) all_scores.push_back(d.score);
        for (const auto& t : tags.tags)
            for (const auto& d : set.detections)
                if (d.label == t) selected_scores.push_back(d.score);
        std::sort(all_scores.rbegin(), all_scores.rend());
        all_scores.resize(tags.tags.size());
        std::sort(selected_scores.rbegin(), selected_scores.rend());
        REQUIRE(selected_scores == all_scores);
    }
}

TEST_CASE("build_input format is exact") {
    CHECK(build_input("A man riding", TagList{{"man", "motorcycle"}}) ==
          "A man riding ## man , motorcycle");
    CHECK(build_input("A cat", TagList{}) == "A cat ##");
    CHECK(build_input("A cat", TagList{{"red car"}}) == "A cat ## red car");
    CHECK_THROWS_AS(build_input("", TagList{{"x"}}), Error);
    CHECK_THROWS_AS(build_input("   ", TagList{}), Error);
}

TEST_CASE("parse_enriched inverts build_input") {
    const std::vector<std::pair<std::string, TagList>> cases = {
        {"A man riding", TagList{{"man", "motorcycle"}}},
        {"A cat", TagList{}},
        {"A cat", TagList{{"red car", "tree"}}},
    };
    for (const auto& [sentence, tags] : cases) {
        auto [s, t] = parse_enriched(build_input(sentence, tags));
        CHECK(s == sentence);
        CHECK(t == tags);
    }
}

TEST_CASE("filter_gt_objects thresholds on intersection over object area") {
    Box region{0, 0, 10, 10};
    GtAnnotationSet gt;
    gt.image_id = "img";

    SUBCASE("fully inside is kept at min_overlap 0") {
        gt.objects = {{{"car"}, {}, Box{2, 2, 3, 3}}};
        CHECK(filter_gt_objects(gt, region).tags == std::vector<std::string>{"car"});
    }
    SUBCASE("disjoint is dropped") {
        gt.objects = {{{"car"}, {}, Box{20, 20, 5, 5}}};
        CHECK(filter_gt_objects(gt, region).tags.empty());
    }
    SUBCASE("half overlap vs a 0.6 threshold") {
        // Object box [5,15)x[0,10): intersection with the region is 5*10=50,
        // object area 100, ratio exactly 0.5.
        gt.objects = {{{"car"}, {}, Box{5, 0, 10, 10}}};
        CHECK(filter_gt_objects(gt, region, 0.6).tags.empty());
        CHECK(filter_gt_objects(gt, region, 0.4).tags ==
              std::vector<std::string>{"car"});
        // Strict inequality: ratio 0.5 against threshold 0.5 drops.
        CHECK(filter_gt_objects(gt, region, 0.5).tags.empty());
    }
    SUBCASE("first name is emitted, annotation order kept") {
        gt.objects = {{{"tennis court", "court"}, {}, Box{0, 0, 2, 2}},
                      {{"man"}, {}, Box{1, 1, 2, 2}}};
        CHECK(filter_gt_objects(gt, region).tags ==
              std::vector<std::string>{"tennis court", "man"});
    }
}

TEST_CASE("attach_attributes rewrites matched tags only") {
    GtAnnotationSet gt;
    gt.image_id = "img";
    gt.objects = {{{"car"}, {"red", "parked"}, Box{0, 0, 1, 1}}};
    Lexicon colors = default_color_lexicon();

    SUBCASE("color lexicon keeps only color attributes") {
        auto out = attach_attributes(TagList{{"car"}}, gt, attr_filter_from_lexicon(colors));
        CHECK(out.tags == std::vector<std::string>{"red car"});
    }
    SUBCASE("unmatched tags pass through") {
        auto out = attach_attributes(TagList{{"dog"}}, gt, attr_filter_from_lexicon(colors));
        CHECK(out.tags == std::vector<std::string>{"dog"});
    }
    SUBCASE("adjective mode prepends all attributes in annotation order") {
        GtAnnotationSet gt2;
        gt2.objects = {{{"car"}, {"red", "small"}, Box{0, 0, 1, 1}}};
        auto out = attach_attributes(TagList{{"car"}}, gt2, attr_filter_accept_all());
        CHECK(out.tags == std::vector<std::string>{"red small car"});
    }
    SUBCASE("plural folding and case-insensitive matching") {
        GtAnnotationSet gt2;
        gt2.objects = {{{"Cars"}, {"red"}, Box{0, 0, 1, 1}}};
        auto out = attach_attributes(TagList{{"car"}}, gt2, attr_filter_accept_all());
        CHECK(out.tags == std::vector<std::string>{"red car"});
    }
    SUBCASE("first matching object wins") {
        GtAnnotationSet gt2;
        gt2.objects = {{{"car"}, {"blue"}, Box{0, 0, 1, 1}},
                       {{"car"}, {"green"}, Box{0, 0, 1, 1}}};
        auto out = attach_attributes(TagList{{"car"}}, gt2, attr_filter_accept_all());
        CHECK(out.tags == std::vector<std::string>{"blue car"});
    }
    SUBCASE("never reorders, adds or removes tags") {
        auto out = attach_attributes(TagList{{"dog", "car", "tree"}}, gt,
                                     attr_filter_from_lexicon(colors));
        CHECK(out.tags == std::vector<std::string>{"dog", "red car", "tree"});
    }
}
