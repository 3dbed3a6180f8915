#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

// Eleven-question legal/ethical viability gate. Each question has a fixed
// risk polarity; two of them (explicit ToS prohibition, robots exclusion)
// are enforceable and escalate to a hard stop.
namespace geoharvest::compliance {

enum class Answer { yes, no, unknown };

struct ViabilityAssessment {
  std::map<std::string, Answer> answers;     // "Q1".."Q11"
  std::map<std::string, std::string> notes;  // optional free text per question
};

enum class VerdictLevel { proceed, caution, stop };

struct ComplianceVerdict {
  VerdictLevel level = VerdictLevel::proceed;
  std::vector<std::string> triggered_questions;
  bool robots_allows_target = true;
};

struct QuestionSpec {
  std::string id;
  std::string label;  // short description of what the question checks
  Answer risk_answer; // which answer indicates risk
  bool blocking;      // risk answer escalates caution -> stop
};

// The 11 checklist questions in fixed order, with the shipped polarity table.
const std::vector<QuestionSpec>& viability_questions();

Answer parse_answer(std::string_view s);  // throws ValidationError
std::string answer_name(Answer a);
std::string level_name(VerdictLevel l);

// Answers file: one "Qn: yes|no|unknown" per line; '#' comments allowed.
// Lines of the form "Qn.note: text" attach a note.
ViabilityAssessment parse_answers_file(std::string_view text);

// Throws ValidationError naming the first missing question id. `unknown`
// answers count as risk for caution purposes (never for stop) unless
// unknown_is_risk is cleared.
ComplianceVerdict assess_viability(const ViabilityAssessment& a, bool unknown_is_risk = true);

nlohmann::json verdict_to_json(const ComplianceVerdict& v, const ViabilityAssessment& a);
std::string verdict_to_text(const ComplianceVerdict& v, const ViabilityAssessment& a);

}  // namespace geoharvest::compliance
