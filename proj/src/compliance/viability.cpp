#include "geoharvest/compliance/viability.hpp"

#include <sstream>

#include "geoharvest/util/errors.hpp"
#include "geoharvest/util/strings.hpp"

namespace geoharvest::compliance {

const std::vector<QuestionSpec>& viability_questions() {
  static const std::vector<QuestionSpec> kQuestions = {
      {"Q1", "a viable alternative data source exists", Answer::yes, false},
      {"Q2", "the site's terms of service explicitly forbid automated collection", Answer::yes,
       true},
      {"Q3", "the site names a rights holder and a content license", Answer::no, false},
      {"Q4", "collection could materially burden the site or its server", Answer::yes, false},
      {"Q5", "the site has blocked access or demanded that collection cease", Answer::yes, false},
      {"Q6", "the site's robots.txt restricts or forbids the planned access", Answer::yes, true},
      {"Q7", "only a small fraction of the site's database is collected", Answer::no, false},
      {"Q8", "the data could expose individuals or protected groups", Answer::yes, false},
      {"Q9", "the data could reveal confidential organizational information", Answer::yes, false},
      {"Q10", "the project could diminish the value of the site's service", Answer::yes, false},
      {"Q11", "data quality problems could mislead downstream decisions", Answer::yes, false},
  };
  return kQuestions;
}

Answer parse_answer(std::string_view s) {
  std::string v = str::to_lower(str::trim(s));
  if (v == "yes" || v == "y") return Answer::yes;
  if (v == "no" || v == "n") return Answer::no;
  if (v == "unknown" || v == "?") return Answer::unknown;
  throw ValidationError("invalid answer '" + std::string(s) + "' (expected yes|no|unknown)");
}

std::string answer_name(Answer a) {
  switch (a) {
    case Answer::yes: return "yes";
    case Answer::no: return "no";
    default: return "unknown";
  }
}

std::string level_name(VerdictLevel l) {
  switch (l) {
    case VerdictLevel::proceed: return "proceed";
    case VerdictLevel::caution: return "caution";
    default: return "stop";
  }
}

ViabilityAssessment parse_answers_file(std::string_view text) {
  ViabilityAssessment a;
  for (const std::string& raw : str::split_lines(text)) {
    std::string_view line = str::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string_view::npos)
      throw ValidationError("answers file: malformed line '" + std::string(line) + "'");
    std::string key(str::trim(line.substr(0, colon)));
    std::string_view value = str::trim(line.substr(colon + 1));
    if (key.size() > 5 && key.substr(key.size() - 5) == ".note") {
      a.notes[key.substr(0, key.size() - 5)] = std::string(value);
    } else {
      a.answers[key] = parse_answer(value);
    }
  }
  return a;
}

ComplianceVerdict assess_viability(const ViabilityAssessment& a, bool unknown_is_risk) {
  ComplianceVerdict v;
  bool stop = false;
  for (const auto& q : viability_questions()) {
    auto it = a.answers.find(q.id);
    if (it == a.answers.end())
      throw ValidationError("viability assessment missing answer for " + q.id);
    const Answer ans = it->second;
    const bool risk = (ans == q.risk_answer) || (unknown_is_risk && ans == Answer::unknown);
    if (risk) {
      v.triggered_questions.push_back(q.id);
      // only an explicit risk answer stops; unknown stays at caution
      if (q.blocking && ans == q.risk_answer) stop = true;
    }
  }
  for (const auto& [id, ans] : a.answers) {
    (void)ans;
    bool known = false;
    for (const auto& q : viability_questions())
      if (q.id == id) known = true;
    if (!known) throw ValidationError("viability assessment has unexpected question id " + id);
  }
  v.level = stop                           ? VerdictLevel::stop
            : v.triggered_questions.empty() ? VerdictLevel::proceed
                                            : VerdictLevel::caution;
  return v;
}

nlohmann::json verdict_to_json(const ComplianceVerdict& v, const ViabilityAssessment& a) {
  nlohmann::json answers = nlohmann::json::object();
  for (const auto& q : viability_questions()) {
    nlohmann::json entry;
    entry["answer"] = answer_name(a.answers.at(q.id));
    entry["label"] = q.label;
    if (auto it = a.notes.find(q.id); it != a.notes.end()) entry["note"] = it->second;
    answers[q.id] = entry;
  }
  return nlohmann::json{{"level", level_name(v.level)},
                        {"triggered_questions", v.triggered_questions},
                        {"robots_allows_target", v.robots_allows_target},
                        {"answers", answers}};
}

std::string verdict_to_text(const ComplianceVerdict& v, const ViabilityAssessment& a) {
  std::ostringstream out;
  out << "viability verdict: " << level_name(v.level) << "\n";
  for (const auto& q : viability_questions()) {
    bool hit = false;
    for (const auto& t : v.triggered_questions)
      if (t == q.id) hit = true;
    out << "  " << (hit ? "[!]" : "   ") << " " << q.id << " (" << q.label
        << "): " << answer_name(a.answers.at(q.id)) << "\n";
  }
  if (!v.robots_allows_target) out << "  [!] robots.txt disallows the target path\n";
  return out.str();
}

}  // namespace geoharvest::compliance
