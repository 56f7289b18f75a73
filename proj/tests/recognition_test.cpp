#include <gtest/gtest.h>

#include <algorithm>

#include "panoptica/recognition.hpp"
#include "support/classify_oracle.hpp"
#include "support/fixtures.hpp"

namespace panoptica {
namespace {

Perception names(std::vector<std::string> n) { return Perception{std::move(n), {}}; }

TEST(Recognition, NormalizeName) {
  EXPECT_EQ(normalize_name("  Opera   Work "), "opera_work");
  EXPECT_EQ(normalize_name("opera_work"), "opera_work");
  EXPECT_EQ(normalize_name("Date\tof  Birth"), "date_of_birth");
  EXPECT_EQ(normalize_name("   "), "");
}

TEST(Recognition, ExactMatchRanksFirst) {
  const Vocabulary v = testing::composition_vocabulary();
  const auto ranked = classify(v, names({"title", "author"}));
  ASSERT_EQ(ranked.size(), 1u);  // Author shares no name and is omitted.
  EXPECT_EQ(ranked[0].class_name, "Composition");
  EXPECT_EQ(ranked[0].name_score, Ratio::of(1, 1));
  EXPECT_EQ(ranked[0].score, Ratio::of(1, 1));
  EXPECT_EQ(match_report(ranked[0]),
            "Composition score=1.000 matched=[author,title] missing_required=[] value_compat=1.000");
}

TEST(Recognition, IdentityScoresOne) {
  const Vocabulary v = testing::opera_vocabulary();
  for (const auto& cls : v.classes) {
    std::vector<std::string> n;
    for (const auto& a : cls.attributes) n.push_back(a.name);
    const auto ranked = classify(v, names(n));
    const auto it = std::find_if(ranked.begin(), ranked.end(),
                                 [&](const ClassMatch& m) { return m.class_name == cls.name; });
    ASSERT_NE(it, ranked.end());
    EXPECT_EQ(it->score, Ratio::of(1, 1)) << cls.name;
    EXPECT_EQ(ranked.front().score, Ratio::of(1, 1));
  }
}

TEST(Recognition, BadLinkSampleLowersScore) {
  const Vocabulary v = testing::composition_vocabulary();
  Perception p = names({"title", "author"});
  p.samples["author"] = {"not-an-id"};
  const auto ranked = classify(v, p);
  ASSERT_EQ(ranked.size(), 1u);
  // 0.8 * 1 + 0.2 * 1/2
  EXPECT_EQ(ranked[0].value_compat, Ratio::of(1, 2));
  EXPECT_EQ(ranked[0].score, Ratio::of(9, 10));
  EXPECT_EQ(match_report(ranked[0]),
            "Composition score=0.900 matched=[author,title] missing_required=[] value_compat=0.500");

  // A known label of the target class is compatible.
  const LabelLookup known = [](std::string_view cls, std::string_view label) {
    return cls == "Author" && label == "not-an-id";
  };
  EXPECT_EQ(classify(v, p, known)[0].score, Ratio::of(1, 1));
  p.samples["author"] = {"17"};
  EXPECT_EQ(classify(v, p)[0].score, Ratio::of(1, 1));
}

TEST(Recognition, PartialMatchListsMissingRequiredSorted) {
  const Vocabulary v = testing::opera_vocabulary();
  const auto ranked = classify(v, names({"voice"}));
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].class_name, "Roles");  // tie broken by declaration order
  EXPECT_EQ(ranked[1].class_name, "Small Roles");
  EXPECT_EQ(ranked[0].missing_required, (std::set<std::string>{"name", "opera"}));
  // 0.8 * 1/3 + 0.2
  EXPECT_EQ(ranked[0].score, Ratio::of(7, 15));
  EXPECT_EQ(match_report(ranked[0]),
            "Roles score=0.467 matched=[voice] missing_required=[name,opera] value_compat=1.000");
}

TEST(Recognition, TieBrokenByFewerMissingRequired) {
  Vocabulary v = create_class(Vocabulary{}, "Strict", false);
  v = add_attribute(v, "Strict", {"a", Kind::text, {}, true});
  v = add_attribute(v, "Strict", {"b", Kind::text, {}, true});
  v = create_class(v, "Loose", false);
  v = add_attribute(v, "Loose", {"a", Kind::text, {}, true});
  v = add_attribute(v, "Loose", {"c", Kind::text, {}, false});
  const auto ranked = classify(v, names({"a"}));
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].score, ranked[1].score);
  EXPECT_EQ(ranked[0].class_name, "Loose");
}

TEST(Recognition, EmptyPerceptionRejected) {
  const Vocabulary v = testing::composition_vocabulary();
  try {
    classify(v, names({" ", ""}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyPerception);
  }
}

TEST(Recognition, SampleCompatibility) {
  EXPECT_TRUE(sample_compatible({"n", Kind::integer, {}, false}, " 42 "));
  EXPECT_FALSE(sample_compatible({"n", Kind::integer, {}, false}, "4.2"));
  EXPECT_TRUE(sample_compatible({"d", Kind::date, {}, false}, "1904-02-17"));
  EXPECT_FALSE(sample_compatible({"d", Kind::date, {}, false}, "1904-02-30"));
  EXPECT_TRUE(sample_compatible({"b", Kind::boolean, {}, false}, "FALSE"));
  EXPECT_TRUE(sample_compatible({"t", Kind::text, {}, false}, "anything"));
}

TEST(Recognition, JsonCarriesReport) {
  const Vocabulary v = testing::composition_vocabulary();
  const Json j = to_json(classify(v, names({"title"}))[0]);
  EXPECT_EQ(j["class"], "Composition");
  EXPECT_EQ(j["matched"], Json::array({"title"}));
  EXPECT_EQ(j["missing_required"], Json::array());
  EXPECT_DOUBLE_EQ(j["score"].get<double>(), 0.8 * 0.5 + 0.2);
}

TEST(RecognitionProperty, MatchesIndependentOracle) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    testing::Rng rng(seed);
    const auto c = testing::random_classify_case(rng);
    std::vector<std::string> got;
    for (const auto& m : classify(c.vocab, c.perception)) {
      got.push_back(m.class_name);
      ASSERT_GE(m.score, Ratio::of(0, 1));
      ASSERT_LE(m.score, Ratio::of(1, 1));
    }
    ASSERT_EQ(got, testing::oracle_ranking(c.vocab, c.perception)) << "seed " << seed;
  }
}

TEST(RecognitionProperty, PermutationInvariance) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    testing::Rng rng(seed);
    auto c = testing::random_classify_case(rng);
    const auto a = classify(c.vocab, c.perception);
    std::shuffle(c.perception.attribute_names.begin(), c.perception.attribute_names.end(), rng);
    const auto b = classify(c.vocab, c.perception);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSERT_EQ(match_report(a[i]), match_report(b[i]));
    }
  }
}

TEST(RecognitionProperty, AddingOwnNameNeverLowersNameScore) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    testing::Rng rng(seed);
    auto c = testing::random_classify_case(rng);
    const auto before = classify(c.vocab, c.perception);
    for (const auto& cls : c.vocab.classes) {
      Perception more = c.perception;
      more.attribute_names.push_back(cls.attributes[rng() % cls.attributes.size()].name);
      const auto after = classify(c.vocab, more);
      Ratio old_score;
      for (const auto& m : before) {
        if (m.class_name == cls.name) old_score = m.name_score;
      }
      for (const auto& m : after) {
        if (m.class_name == cls.name) ASSERT_GE(m.name_score, old_score);
      }
    }
  }
}

}  // namespace
}  // namespace panoptica
