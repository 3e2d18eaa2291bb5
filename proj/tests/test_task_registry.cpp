#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "promptvote/errors.hpp"
#include "promptvote/task_registry.hpp"

using namespace promptvote;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing file " << path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::string kGoldenDir = std::string(PV_TEST_DIR) + "/golden";

}  // namespace

TEST_CASE("builtin catalogue covers all eleven tasks") {
  auto ids = builtin_task_ids();
  CHECK(ids.size() == 11);
  for (const auto& id : ids) {
    TaskSpec spec = load_task(id);
    CHECK(spec.task_id == id);
    CHECK_NOTHROW(spec.validate());
  }
}

TEST_CASE("stored templates byte-match the frozen golden files") {
  for (const auto& id : builtin_task_ids()) {
    TaskSpec spec = load_task(id);
    CHECK_MESSAGE(spec.gen_template == read_file(kGoldenDir + "/" + id + "_gen.txt"),
                  id << " generation template drifted");
    CHECK_MESSAGE(spec.para_template == read_file(kGoldenDir + "/" + id + "_para.txt"),
                  id << " paraphrase template drifted");
  }
}

TEST_CASE("task shapes match their benchmark definitions") {
  TaskSpec sst2 = load_task("sst2");
  CHECK(sst2.labels == std::vector<std::string>{"positive", "negative"});
  CHECK(sst2.answer_mode == AnswerMode::CLASS_LABEL);

  TaskSpec trec = load_task("trec");
  CHECK(trec.labels.size() == 6);
  CHECK(trec.has_label("Abbreviation"));
  CHECK(trec.has_label("Number"));

  TaskSpec gsm8k = load_task("gsm8k");
  CHECK(gsm8k.labels.empty());
  CHECK(gsm8k.answer_mode == AnswerMode::INTEGER);

  TaskSpec medqa = load_task("medqa");
  CHECK(medqa.answer_mode == AnswerMode::MC_LETTER);
  CHECK(medqa.labels == std::vector<std::string>{"A", "B", "C", "D", "E"});
}

TEST_CASE("unknown task id raises") {
  CHECK_THROWS_AS(load_task("nope-not-a-task"), Error);
}

TEST_CASE("build_plan is deterministic and cycles the full topic pool") {
  TaskSpec sst5 = load_task("sst5");
  DiversityPlan a = build_plan(sst5, "good", 5, 77);
  DiversityPlan b = build_plan(sst5, "good", 5, 77);
  REQUIRE(a.size() == 5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.slots[i].topic == b.slots[i].topic);
    CHECK(a.slots[i].sentence_count == b.slots[i].sentence_count);
  }
  // sst5 pool has exactly 5 topics, so a 5-slot plan uses each one once.
  std::set<std::string> seen;
  for (const auto& slot : a.slots) seen.insert(slot.topic);
  CHECK(seen == std::set<std::string>{"acting", "plot", "direction", "dialogue", "pacing"});
}

TEST_CASE("plans of length >= 3 contain both a 1- and a 3-sentence slot") {
  TaskSpec cr = load_task("cr");
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    for (int count : {3, 4, 6, 9}) {
      DiversityPlan plan = build_plan(cr, "negative", count, seed);
      REQUIRE(static_cast<int>(plan.size()) == count);
      bool has1 = false, has3 = false;
      for (const auto& slot : plan.slots) {
        CHECK(slot.sentence_count >= 1);
        CHECK(slot.sentence_count <= 3);
        has1 |= slot.sentence_count == 1;
        has3 |= slot.sentence_count == 3;
      }
      CHECK(has1);
      CHECK(has3);
      if (count == 6) {  // 10-topic pool: 6 round-robin slots are distinct
        std::set<std::string> topics;
        for (const auto& slot : plan.slots) topics.insert(slot.topic);
        CHECK(topics.size() == 6);
      }
    }
  }
}

TEST_CASE("single-slot plan is well-formed") {
  TaskSpec mr = load_task("mr");
  DiversityPlan plan = build_plan(mr, "positive", 1, 5);
  REQUIRE(plan.size() == 1);
  CHECK(plan.slots[0].sentence_count >= 1);
  CHECK(plan.slots[0].sentence_count <= 3);
}

TEST_CASE("generation prompt substitutes count, label and plan") {
  TaskSpec sst2 = load_task("sst2");
  std::string prompt = render_gen_prompt(sst2, "positive", build_plan(sst2, "positive", 8, 3));
  CHECK(prompt.find("Create exactly 8 training examples") != std::string::npos);
  CHECK(prompt.find("Label MUST be exactly: positive") != std::string::npos);
  CHECK(prompt.find('{') == std::string::npos);  // fully resolved

  TaskSpec subj = load_task("subj");
  std::string subj_prompt =
      render_gen_prompt(subj, "objective", build_plan(subj, "objective", 6, 0));
  CHECK(subj_prompt.find("topic: plot summary") != std::string::npos);

  TaskSpec gsm8k = load_task("gsm8k");
  std::string math_prompt = render_gen_prompt(gsm8k, "", build_plan(gsm8k, "", 4, 1));
  CHECK(math_prompt.find("Answers MUST be integers") != std::string::npos);
}

TEST_CASE("generation prompt emits one diversity line per slot") {
  TaskSpec news = load_task("news");
  for (int count : {1, 3, 8}) {
    std::string prompt = render_gen_prompt(news, "Sports", build_plan(news, "Sports", count, 9));
    int lines = 0;
    std::istringstream stream(prompt);
    std::string line;
    while (std::getline(stream, line))
      if (line.rfind("- Example", 0) == 0) ++lines;
    CHECK(lines == count);
  }
}

TEST_CASE("paraphrase prompt carries n and the verbatim input") {
  TaskSpec sst2 = load_task("sst2");
  std::string prompt = render_para_prompt(sst2, "great film.", 10);
  CHECK(prompt.find("exactly 10 diverse paraphrases") != std::string::npos);
  CHECK(prompt.find("great film.") != std::string::npos);

  CHECK(render_para_prompt(load_task("gsm8k"), "q", 5)
            .find("Keep numbers and relationships identical") != std::string::npos);
  CHECK(render_para_prompt(load_task("medqa"), "q", 10)
            .find("Keep the medical meaning identical") != std::string::npos);
}

TEST_CASE("input text containing braces does not trip the placeholder check") {
  TaskSpec math500 = load_task("math500");
  std::string prompt = render_para_prompt(math500, "Compute $\\frac{1}{2} + {x}$.", 3);
  CHECK(prompt.find("\\frac{1}{2}") != std::string::npos);
}

TEST_CASE("rendering is pure: identical inputs give identical bytes") {
  TaskSpec trec = load_task("trec");
  DiversityPlan plan = build_plan(trec, "Number", 4, 55);
  CHECK(render_gen_prompt(trec, "Number", plan) == render_gen_prompt(trec, "Number", plan));
}

TEST_CASE("user task file loads and invalid specs are rejected") {
  const std::string dir = std::string(PV_TEST_DIR) + "/data";
  TaskSpec custom = load_task(dir + "/custom_task.json");
  CHECK(custom.task_id == "toy-colors");
  CHECK(custom.labels == std::vector<std::string>{"red", "blue"});
  CHECK(custom.answer_mode == AnswerMode::CLASS_LABEL);
  CHECK_NOTHROW(render_gen_prompt(custom, "red", build_plan(custom, "red", 3, 1)));

  CHECK_THROWS_AS(load_task_file(dir + "/broken_task.json"), Error);
  try {
    load_task_file(dir + "/broken_task.json");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MALFORMED_SPEC);
  }
}
