// Builtin task definitions: label sets, topic pools, style rules and the
// prompt templates for the 11 supported benchmarks. Template text is loaded
// verbatim; the diversity-plan block is marked with {plan} and expanded one
// line per requested example at render time.

#include "promptvote/task_registry.hpp"

namespace promptvote {
namespace {

const char* kClassifierGenHeader =
    "You are a data generator that writes high-quality in-context learning examples "
    "for classification.";

// Shared skeleton for cr/mr/news/trec: they differ only in the task id inside
// the TASK_CONFIGS references.
std::string class_gen_template(const std::string& task_id) {
  std::string t = std::string(kClassifierGenHeader) + R"PV(

Create exactly {num_examples} training examples in THIS STRICT format only:

Example1:
Sentence: "<text>"
Label: {label}
...
Example{num_examples}:
Sentence: "<text>"
Label: {label}

Diversity plan (MUST FOLLOW):
{plan}
(Topics are chosen from TASK_CONFIGS[")PV" + task_id + R"PV("]["topics"][{label}].)

Rules:
- Each example's "Sentence" must contain exactly the number of sentences specified above (1-3).
- Keep sentences concise: typically 3-14 words each.
- Use only ASCII characters. Do NOT include double quotes inside the text.
- Do NOT wrap output in Markdown/code fences.
- Apply label-specific style rules from TASK_CONFIGS[")PV" + task_id + R"PV("]["style_rules"][{label}].
- Output ONLY the examples in the exact format above; no extra text.)PV";
  return t;
}

const char* kDefaultPlanLine = "- Example{i}: write exactly {count} sentence(s); topic: {topic}.";

std::vector<std::string> sentiment_topics() {
  return {"acting/performance", "direction",       "screenplay/dialogue",
          "cinematography",     "editing",         "pacing",
          "soundtrack/music",   "visual effects",  "set & costume design",
          "genre/tone",         "themes/message",  "casting choices",
          "character development", "humor",        "emotional impact"};
}

std::vector<std::string> mr_topics() {
  return {"acting/performance", "direction",      "screenplay/dialogue",
          "cinematography",     "pacing",         "soundtrack/music",
          "visual effects",     "themes/message", "character development",
          "emotional impact"};
}

std::string join_labels(const std::vector<std::string>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ", ";
    out += labels[i];
  }
  return out;
}

void set_class_eval_texts(TaskSpec& t, const std::string& what) {
  t.eval_instruction = "You are a precise classifier. Classify " + what +
                       " into exactly one of these labels: " + join_labels(t.labels) +
                       ". Respond with only the label.";
  t.eval_suffix = "Now classify the following input. Respond with ONLY the label.";
}

TaskSpec make_cr() {
  TaskSpec t;
  t.task_id = "cr";
  t.labels = {"positive", "negative"};
  t.answer_mode = AnswerMode::CLASS_LABEL;
  t.topic_pools["positive"] = {"product quality", "customer service", "value for money",
                               "durability",      "ease of use",      "design",
                               "performance",     "reliability",      "features",
                               "shipping"};
  t.topic_pools["negative"] = {"product defects", "poor service",   "overpriced",
                               "fragility",       "complexity",     "ugly design",
                               "slow performance", "unreliable",    "missing features",
                               "shipping issues"};
  t.style_rules["positive"] =
      "Write clearly POSITIVE product reviews (praise, satisfaction, recommendation).";
  t.style_rules["negative"] =
      "Write clearly NEGATIVE product reviews (criticism, disappointment, complaints).";
  t.gen_template = class_gen_template("cr");
  t.count_token = "{num_examples}";
  t.label_token = "{label}";
  t.plan_line = kDefaultPlanLine;
  t.para_template =
      R"PV(You paraphrase product review sentences while preserving the original sentiment and meaning.
Produce exactly {n} diverse paraphrases of the sentence below. Keep tone and sentiment identical.
Output ONLY the paraphrases, one per line, with no numbering, bullets, or extra commentary.

Sentence:
{s})PV";
  t.body_field = "Sentence";
  t.label_field = "Label";
  set_class_eval_texts(t, "the product review sentence");
  return t;
}

TaskSpec make_mr() {
  TaskSpec t;
  t.task_id = "mr";
  t.labels = {"positive", "negative"};
  t.answer_mode = AnswerMode::CLASS_LABEL;
  t.topic_pools["positive"] = mr_topics();
  t.topic_pools["negative"] = mr_topics();
  t.style_rules["positive"] =
      "Write clearly POSITIVE movie-review sentences (praise, enjoyment, recommendation).";
  t.style_rules["negative"] =
      "Write clearly NEGATIVE movie-review sentences (criticism, disappointment, complaints).";
  t.gen_template = class_gen_template("mr");
  t.count_token = "{num_examples}";
  t.label_token = "{label}";
  t.plan_line = kDefaultPlanLine;
  t.para_template =
      R"PV(You paraphrase movie-review sentences while preserving the original sentiment and meaning.
Produce exactly {n} diverse paraphrases of the sentence below. Keep tone and sentiment identical.
Output ONLY the paraphrases, one per line, with no numbering, bullets, or extra commentary.

Sentence:
{s})PV";
  t.body_field = "Sentence";
  t.label_field = "Label";
  set_class_eval_texts(t, "the movie-review sentence");
  return t;
}

TaskSpec make_sst2() {
  TaskSpec t;
  t.task_id = "sst2";
  t.labels = {"positive", "negative"};
  t.answer_mode = AnswerMode::CLASS_LABEL;
  t.topic_pools["positive"] = sentiment_topics();
  t.topic_pools["negative"] = sentiment_topics();
  t.style_rules["positive"] =
      "Write clearly POSITIVE sentiment (praise, enjoyment, recommendation).";
  t.style_rules["negative"] =
      "Write clearly NEGATIVE sentiment (criticism, disappointment, complaints).";
  t.gen_template = std::string(kClassifierGenHeader) + R"PV(

Create exactly {num_examples} training examples in THIS STRICT format only:

Example1:
Sentence: "<text>"
Label: {label}
...
Example{num_examples}:
Sentence: "<text>"
Label: {label}

Diversity plan (MUST FOLLOW):
{plan}
(Topics come from a sentiment topic pool; the correct label is fixed per run.)

Rules:
- Each example's "Sentence" must contain exactly the number of sentences specified above (1-3).
- Keep sentences concise: typically 3-14 words each.
- Use only ASCII characters. Do NOT include double quotes inside the text.
- Use exactly ONE 'Sentence:' line per example; if multiple sentences are needed, put them inside the same quotes separated by a space.
- Do NOT wrap output in Markdown/code fences.
- Label MUST be exactly: {label} (one of: positive/negative).
- If {label}=positive: write clearly POSITIVE sentiment (praise, enjoyment, recommendation).
- If {label}=negative: write clearly NEGATIVE sentiment (criticism, disappointment, complaints).
- Output ONLY the examples in the exact format above; no extra text.)PV";
  t.count_token = "{num_examples}";
  t.label_token = "{label}";
  t.plan_line = kDefaultPlanLine;
  t.para_template =
      R"PV(You paraphrase movie-review sentences while preserving the original sentiment and meaning.
Produce exactly {n} diverse paraphrases of the sentence below. Keep tone and sentiment identical.
Output ONLY the paraphrases, one per line, with no numbering, bullets, or extra commentary.

Sentence:
{s})PV";
  t.body_field = "Sentence";
  t.label_field = "Label";
  set_class_eval_texts(t, "the movie-review sentence");
  return t;
}

TaskSpec make_sst5() {
  TaskSpec t;
  t.task_id = "sst5";
  t.labels = {"terrible", "bad", "okay", "good", "great"};
  t.answer_mode = AnswerMode::CLASS_LABEL;
  const std::vector<std::string> pool = {"acting", "plot", "direction", "dialogue", "pacing"};
  for (const auto& l : t.labels) t.topic_pools[l] = pool;
  t.style_rules["terrible"] = "Express extreme dislike; harsh, dismissive language.";
  t.style_rules["bad"] = "Express clear dislike without extremes.";
  t.style_rules["okay"] = "Express a mixed or lukewarm judgment.";
  t.style_rules["good"] = "Express clear approval without superlatives.";
  t.style_rules["great"] = "Express enthusiastic praise; superlatives welcome.";
  t.gen_template = std::string(kClassifierGenHeader) + R"PV(

Create exactly {num_examples} training examples in THIS STRICT format only:

Example1:
Sentence: "<text>"
Label: {label}
...
Example{num_examples}:
Sentence: "<text>"
Label: {label}

Diversity plan (MUST FOLLOW):
{plan}
(Topics cycle through: acting; plot; direction; dialogue; pacing.)

Rules:
- Each example's "Sentence" must contain exactly the number of sentences specified above (1-3).
- Keep sentences concise: typically 3-14 words each.
- Use only ASCII characters. Do NOT include double quotes inside the text.
- Do NOT wrap output in Markdown/code fences.
- Apply label-intensity rules (terrible/bad/okay/good/great) as specified in TASK_CONFIGS["sst5"]["style_rules"][{label}].
- Output ONLY the examples in the exact format above; no extra text.)PV";
  t.count_token = "{num_examples}";
  t.label_token = "{label}";
  t.plan_line = kDefaultPlanLine;
  t.para_template =
      R"PV(You paraphrase movie-review sentences while preserving the original sentiment intensity.
Produce exactly {n} diverse paraphrases. Keep the sentiment level (terrible/bad/okay/good/great) identical.
Output ONLY the paraphrases, one per line.

Sentence:
{s})PV";
  t.body_field = "Sentence";
  t.label_field = "Label";
  set_class_eval_texts(t, "the movie-review sentence");
  return t;
}

TaskSpec make_news() {
  TaskSpec t;
  t.task_id = "news";
  t.labels = {"World", "Sports", "Business", "Tech"};
  t.answer_mode = AnswerMode::CLASS_LABEL;
  t.topic_pools["World"] = {"international politics", "war/conflict", "diplomacy",
                            "elections", "human rights"};
  t.topic_pools["Sports"] = {"football", "basketball", "olympics", "tennis", "soccer"};
  t.topic_pools["Business"] = {"stock market", "mergers", "economy", "earnings", "banking"};
  t.topic_pools["Tech"] = {"software", "hardware", "internet", "AI", "startups"};
  t.style_rules["World"] = "Write headlines about international affairs.";
  t.style_rules["Sports"] = "Write headlines about sporting events and athletes.";
  t.style_rules["Business"] = "Write headlines about markets, companies and finance.";
  t.style_rules["Tech"] = "Write headlines about technology and science.";
  t.gen_template = class_gen_template("news");
  t.count_token = "{num_examples}";
  t.label_token = "{label}";
  t.plan_line = kDefaultPlanLine;
  t.para_template =
      R"PV(You paraphrase news headlines while preserving the original topic and meaning.
Produce exactly {n} diverse paraphrases. Keep the topic category identical.
Output ONLY the paraphrases, one per line.

Headline:
{s})PV";
  t.body_field = "Sentence";
  t.label_field = "Label";
  set_class_eval_texts(t, "the news headline");
  return t;
}

TaskSpec make_trec() {
  TaskSpec t;
  t.task_id = "trec";
  t.labels = {"Abbreviation", "Entity", "Description", "Human", "Location", "Number"};
  t.answer_mode = AnswerMode::CLASS_LABEL;
  t.topic_pools["Abbreviation"] = {"acronym meaning", "abbreviation expansion"};
  t.topic_pools["Entity"] = {"product", "animal", "color", "invention", "food"};
  t.topic_pools["Description"] = {"definition", "manner", "reason"};
  t.topic_pools["Human"] = {"person name", "inventor", "author", "discoverer"};
  t.topic_pools["Location"] = {"city", "country", "mountain", "address"};
  t.topic_pools["Number"] = {"date", "count", "distance", "money", "percentage"};
  t.style_rules["Abbreviation"] = "Write questions asking what an abbreviation stands for.";
  t.style_rules["Entity"] = "Write questions whose answer is a thing or concept.";
  t.style_rules["Description"] = "Write questions asking for a definition or explanation.";
  t.style_rules["Human"] = "Write questions whose answer is a person or group.";
  t.style_rules["Location"] = "Write questions whose answer is a place.";
  t.style_rules["Number"] = "Write questions whose answer is a numeric value.";
  t.gen_template = class_gen_template("trec");
  t.count_token = "{num_examples}";
  t.label_token = "{label}";
  t.plan_line = kDefaultPlanLine;
  t.para_template =
      R"PV(You paraphrase questions while preserving the question type and intent.
Produce exactly {n} diverse paraphrases. Keep the answer type requirement identical.
Output ONLY the paraphrases, one per line.

Question:
{s})PV";
  t.body_field = "Sentence";
  t.label_field = "Label";
  set_class_eval_texts(t, "the question by its expected answer type");
  return t;
}

TaskSpec make_subj() {
  TaskSpec t;
  t.task_id = "subj";
  t.labels = {"subjective", "objective"};
  t.answer_mode = AnswerMode::CLASS_LABEL;
  t.topic_pools["subjective"] = {"opinion on acting",
                                 "judgment of direction",
                                 "critique of dialogue",
                                 "assessment of cinematography",
                                 "evaluation of pacing",
                                 "review of soundtrack",
                                 "opinion on visual effects",
                                 "judgment of set design",
                                 "assessment of tone",
                                 "opinion on themes",
                                 "evaluation of casting",
                                 "critique of character development",
                                 "assessment of humor",
                                 "emotional reaction"};
  t.topic_pools["objective"] = {"plot summary",
                                "character actions",
                                "story events",
                                "character relationships",
                                "plot twist description",
                                "setting description",
                                "character background",
                                "story conflict",
                                "character motivation",
                                "narrative arc",
                                "scene description",
                                "character introduction",
                                "plot setup",
                                "story resolution"};
  t.style_rules["subjective"] = "Write opinions/judgments (evaluative language).";
  t.style_rules["objective"] = "Write factual plot/story descriptions (no judgment).";
  t.gen_template =
      R"PV(You generate training examples for subjectivity classification. SUBJECTIVE = opinions about the movie. OBJECTIVE = factual plot/story descriptions.

Create exactly {example_count} training examples in this exact format:

Example1:
Sentence: "<text>"
Label: {target_label}

Example2:
Sentence: "<text>"
Label: {target_label}

...

Diversity plan (follow exactly):
{plan}

Rules:
- Each Sentence must contain exactly the specified number of sentences (1-3).
- Keep sentences concise: 3-14 words each.
- Include variety: at least one short (<=5 words) and one longer (10-14 words).
- Use only ASCII characters, no quotes inside the text.
- Put multiple sentences in the same quotes separated by spaces.
- No markdown or code fences.
- If {target_label}=subjective: write opinions/judgments (evaluative language).
- If {target_label}=objective: write factual plot/story descriptions (no judgment).
- Output ONLY the examples, no extra text.)PV";
  t.count_token = "{example_count}";
  t.label_token = "{target_label}";
  t.plan_line = "- Example{i}: {count} sentence(s); topic: {topic}.";
  t.para_template =
      R"PV(You paraphrase sentences while preserving the original MEANING and SUBJECTIVITY TYPE (whether it expresses opinion or describes facts).
Produce exactly {n} diverse paraphrases of the sentence below. Keep the subjectivity classification identical.
Output ONLY the paraphrases, one per line, without numbering or commentary.

Sentence:
{s})PV";
  t.body_field = "Sentence";
  t.label_field = "Label";
  set_class_eval_texts(t, "the sentence");
  return t;
}

TaskSpec make_medqa() {
  TaskSpec t;
  t.task_id = "medqa";
  t.labels = {"A", "B", "C", "D", "E"};
  t.answer_mode = AnswerMode::MC_LETTER;
  const std::vector<std::string> pool = {"diagnosis", "treatment", "pharmacology",
                                         "pathology", "anatomy"};
  for (const auto& l : t.labels) t.topic_pools[l] = pool;
  t.gen_system =
      "You are a data generator that writes high-quality medical multiple-choice "
      "questions for in-context learning.";
  t.gen_template = R"PV(Create exactly {k} training examples in THIS STRICT format only:

Example1:
Question: "<medical question with 5 options A-E>"
Answer: {label}

Example2:
Question: "<medical question with 5 options A-E>"
Answer: {label}

...
Example{k}:
Question: "<medical question with 5 options A-E>"
Answer: {label}

Diversity plan (MUST FOLLOW):
{plan}

Rules:
- Each question MUST include options A:, B:, C:, D:, E:
- The correct answer is always: {label}
- Use realistic medical scenarios (diagnosis, treatment, pharmacology)
- Use only ASCII characters
- Do NOT wrap output in Markdown/code fences
- Output ONLY the examples in the exact format above; no extra text)PV";
  t.count_token = "{k}";
  t.label_token = "{label}";
  t.plan_line = kDefaultPlanLine;
  t.para_template =
      R"PV(You rephrase medical questions while preserving the clinical scenario and answer options.
Produce exactly {n} diverse rephrasings of the question below. Keep the medical meaning identical.
Output ONLY the rephrasings, one per line, with no numbering, bullets, or extra commentary.

Question:
{s})PV";
  t.body_field = "Question";
  t.label_field = "Answer";
  t.eval_instruction =
      "You are a medical expert. Answer the multiple-choice question with a single "
      "letter from A to E.";
  t.eval_suffix = "Now answer the following question with a single letter A-E.";
  return t;
}

TaskSpec make_gsm8k() {
  TaskSpec t;
  t.task_id = "gsm8k";
  t.answer_mode = AnswerMode::INTEGER;
  t.topic_pools[""] = {"arithmetic", "algebra", "word problems", "percentages", "ratios"};
  t.gen_system =
      "You are a data generator that writes grade-school math word problems with "
      "integer answers.";
  t.gen_template = R"PV(Create exactly {k} training examples in THIS STRICT format only:

Example1:
Question: "<math problem>"
Answer: <answer>

Example2:
Question: "<math problem>"
Answer: <answer>

...
Example{k}:
Question: "<math problem>"
Answer: <answer>

Diversity plan (MUST FOLLOW):
{plan}

Rules:
- Each question must be a well-formed math problem
- Each answer must be the correct solution
- Problems should be simple word problems with clear numerical answers
- Answers MUST be integers
- Use only ASCII characters (except for TeX math symbols)
- Do NOT wrap output in Markdown/code fences
- Output ONLY the examples in the exact format above; no extra text)PV";
  t.count_token = "{k}";
  t.label_token = "{label}";
  t.plan_line = kDefaultPlanLine;
  t.para_template =
      R"PV(You rephrase math word problems while preserving the mathematical structure and answer.
Produce exactly {n} diverse rephrasings of the problem below. Keep numbers and relationships identical.
Output ONLY the rephrasings, one per line, with no numbering, bullets, or extra commentary.

Problem:
{s})PV";
  t.body_field = "Question";
  t.label_field = "Answer";
  t.eval_instruction =
      "You are a careful math tutor. Solve the problem step by step, then give the "
      "final integer answer on the last line after 'Answer:'.";
  t.eval_suffix = "Now solve the following problem.";
  return t;
}

TaskSpec make_deepmath() {
  TaskSpec t;
  t.task_id = "deepmath";
  t.answer_mode = AnswerMode::MATH_EXPR;
  t.topic_pools[""] = {"number theory", "calculus", "linear algebra", "probability",
                       "combinatorics"};
  t.gen_system = "You are a data generator that writes advanced mathematics problems.";
  t.gen_template = R"PV(Create exactly {k} training examples in THIS STRICT format only:

Example1:
Question: "<math problem>"
Answer: <answer>

Example2:
Question: "<math problem>"
Answer: <answer>

...
Example{k}:
Question: "<math problem>"
Answer: <answer>

Diversity plan (MUST FOLLOW):
{plan}

Rules:
- Each question must be a well-formed math problem
- Each answer must be the correct solution
- Problems can involve calculus, linear algebra, number theory, probability
- Use TeX notation for math expressions
- Use only ASCII characters (except for TeX math symbols)
- Do NOT wrap output in Markdown/code fences
- Output ONLY the examples in the exact format above; no extra text)PV";
  t.count_token = "{k}";
  t.label_token = "{label}";
  t.plan_line = kDefaultPlanLine;
  t.para_template =
      R"PV(You rephrase advanced mathematics problems while preserving the mathematical content.
Produce exactly {n} diverse rephrasings of the problem below. Keep notation and meaning identical.
Output ONLY the rephrasings, one per line, with no numbering, bullets, or extra commentary.

Problem:
{s})PV";
  t.body_field = "Question";
  t.label_field = "Answer";
  t.eval_instruction =
      "You are an expert mathematician. Solve the problem and give the final answer "
      "in \\boxed{}.";
  t.eval_suffix = "Now solve the following problem.";
  return t;
}

TaskSpec make_math500() {
  TaskSpec t;
  t.task_id = "math500";
  t.answer_mode = AnswerMode::MATH_EXPR;
  t.topic_pools[""] = {"algebra", "geometry", "number theory", "counting", "precalculus"};
  t.gen_system = "You are a data generator that writes competition-style mathematics problems.";
  t.gen_template = R"PV(Create exactly {k} training examples in THIS STRICT format only:

Example1:
Question: "<math problem>"
Answer: <answer>

Example2:
Question: "<math problem>"
Answer: <answer>

...
Example{k}:
Question: "<math problem>"
Answer: <answer>

Diversity plan (MUST FOLLOW):
{plan}

Rules:
- Each question must be a well-formed math problem
- Each answer must be the correct solution
- Problems should be challenging but solvable
- Use TeX notation for math expressions
- Use only ASCII characters (except for TeX math symbols)
- Do NOT wrap output in Markdown/code fences
- Output ONLY the examples in the exact format above; no extra text)PV";
  t.count_token = "{k}";
  t.label_token = "{label}";
  t.plan_line = kDefaultPlanLine;
  t.para_template =
      R"PV(You rephrase competition mathematics problems while preserving the mathematical content.
Produce exactly {n} diverse rephrasings of the problem below. Keep notation and meaning identical.
Output ONLY the rephrasings, one per line, with no numbering, bullets, or extra commentary.

Problem:
{s})PV";
  t.body_field = "Question";
  t.label_field = "Answer";
  t.eval_instruction =
      "You are an expert mathematician. Solve the problem and give the final answer "
      "in \\boxed{}.";
  t.eval_suffix = "Now solve the following problem.";
  return t;
}

}  // namespace

std::vector<std::string> builtin_task_ids() {
  return {"sst2", "sst5", "cr", "mr", "news", "trec", "subj",
          "gsm8k", "deepmath", "math500", "medqa"};
}

// Defined here, used by load_task in task_registry.cpp.
TaskSpec make_builtin_task(const std::string& task_id);

TaskSpec make_builtin_task(const std::string& task_id) {
  if (task_id == "cr") return make_cr();
  if (task_id == "mr") return make_mr();
  if (task_id == "sst2") return make_sst2();
  if (task_id == "sst5") return make_sst5();
  if (task_id == "news") return make_news();
  if (task_id == "trec") return make_trec();
  if (task_id == "subj") return make_subj();
  if (task_id == "medqa") return make_medqa();
  if (task_id == "gsm8k") return make_gsm8k();
  if (task_id == "deepmath") return make_deepmath();
  if (task_id == "math500") return make_math500();
  return {};
}

}  // namespace promptvote
