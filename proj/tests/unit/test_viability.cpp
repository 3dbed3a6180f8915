#include <doctest.h>

#include "geoharvest/compliance/viability.hpp"
#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/rng.hpp"

using namespace geoharvest;
using namespace geoharvest::compliance;

namespace {

// all answers set to the non-risk side
ViabilityAssessment benign() {
  ViabilityAssessment a;
  for (const auto& q : viability_questions())
    a.answers[q.id] = q.risk_answer == Answer::yes ? Answer::no : Answer::yes;
  return a;
}

}  // namespace

TEST_SUITE("viability") {

TEST_CASE("exactly eleven questions in fixed order") {
  const auto& qs = viability_questions();
  REQUIRE(qs.size() == 11);
  for (size_t i = 0; i < qs.size(); ++i) CHECK(qs[i].id == "Q" + std::to_string(i + 1));
  int blocking = 0;
  for (const auto& q : qs)
    if (q.blocking) ++blocking;
  CHECK(blocking == 2);  // ToS prohibition + robots exclusion
}

TEST_CASE("all benign answers yield proceed") {
  auto v = assess_viability(benign());
  CHECK(v.level == VerdictLevel::proceed);
  CHECK(v.triggered_questions.empty());
}

TEST_CASE("explicit ToS prohibition stops") {
  auto a = benign();
  a.answers["Q2"] = Answer::yes;
  auto v = assess_viability(a);
  CHECK(v.level == VerdictLevel::stop);
  REQUIRE(v.triggered_questions.size() == 1);
  CHECK(v.triggered_questions[0] == "Q2");
}

TEST_CASE("robots exclusion stops") {
  auto a = benign();
  a.answers["Q6"] = Answer::yes;
  CHECK(assess_viability(a).level == VerdictLevel::stop);
}

TEST_CASE("privacy risk alone is caution") {
  auto a = benign();
  a.answers["Q8"] = Answer::yes;
  auto v = assess_viability(a);
  CHECK(v.level == VerdictLevel::caution);
  REQUIRE(v.triggered_questions.size() == 1);
  CHECK(v.triggered_questions[0] == "Q8");
}

TEST_CASE("unknown counts as risk but never stops") {
  auto a = benign();
  a.answers["Q2"] = Answer::unknown;
  auto v = assess_viability(a);
  CHECK(v.level == VerdictLevel::caution);

  auto v2 = assess_viability(a, /*unknown_is_risk=*/false);
  CHECK(v2.level == VerdictLevel::proceed);
}

TEST_CASE("missing answer names the question") {
  auto a = benign();
  a.answers.erase("Q7");
  CHECK_THROWS_WITH_AS(assess_viability(a), "viability assessment missing answer for Q7",
                       ValidationError);
}

TEST_CASE("unexpected question id rejected") {
  auto a = benign();
  a.answers["Q12"] = Answer::no;
  CHECK_THROWS_AS(assess_viability(a), ValidationError);
}

TEST_CASE("never proceed while any answer is risk polarity") {
  rng::Xoshiro256pp r(31);
  for (int trial = 0; trial < 300; ++trial) {
    ViabilityAssessment a;
    bool any_risk = false;
    for (const auto& q : viability_questions()) {
      int pick = static_cast<int>(r.below(3));
      Answer ans = pick == 0 ? Answer::yes : pick == 1 ? Answer::no : Answer::unknown;
      a.answers[q.id] = ans;
      if (ans == q.risk_answer || ans == Answer::unknown) any_risk = true;
    }
    auto v = assess_viability(a);
    if (any_risk) CHECK(v.level != VerdictLevel::proceed);
    else CHECK(v.level == VerdictLevel::proceed);
  }
}

TEST_CASE("answers file parsing") {
  auto a = parse_answers_file("# comment\nQ1: no\nQ1.note: checked datasets\nQ2: unknown\n");
  CHECK(a.answers.at("Q1") == Answer::no);
  CHECK(a.answers.at("Q2") == Answer::unknown);
  CHECK(a.notes.at("Q1") == "checked datasets");
  CHECK_THROWS_AS(parse_answers_file("Q1: maybe\n"), ValidationError);
  CHECK_THROWS_AS(parse_answers_file("no colon here\n"), ValidationError);
}

TEST_CASE("verdict renders as json and text") {
  auto a = benign();
  a.answers["Q8"] = Answer::yes;
  auto v = assess_viability(a);
  auto j = verdict_to_json(v, a);
  CHECK(j["level"] == "caution");
  CHECK(j["triggered_questions"][0] == "Q8");
  CHECK(j["answers"].size() == 11);
  auto text = verdict_to_text(v, a);
  CHECK(text.find("caution") != std::string::npos);
  CHECK(text.find("[!] Q8") != std::string::npos);
}

}  // TEST_SUITE
