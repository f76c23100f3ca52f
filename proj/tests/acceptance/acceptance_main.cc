// Copyright 2026 The radiogen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "acceptance/oracles.h"
#include "common/hash.h"
#include "common/jsonl.h"
#include "common/text.h"
#include "corpus/corpus.h"
#include "expert/expert.h"
#include "inference/backends.h"
#include "inference/generation.h"
#include "inference/segmenter.h"
#include "kernels/kernels.h"
#include "pipeline/report_tables.h"
#include "prompt/prompt_forge.h"
#include "rouge/rouge.h"
#include "rouge/score_table.h"
#include "selection/sweep.h"
#include "selection/trainer.h"
#include "selection/training_job.h"

namespace fs = std::filesystem;
using namespace radiogen;

namespace {

const fs::path kFixtures = RADIOGEN_FIXTURE_DIR;
const fs::path kGolden = RADIOGEN_GOLDEN_DIR;
const fs::path kData = RADIOGEN_DATA_DIR;
const std::string kCli = RADIOGEN_CLI_PATH;

struct Outcome {
  bool passed = true;
  std::string detail;

  void Check(bool ok, const std::string& what) {
    if (!ok && passed) detail = what;
    passed = passed && ok;
  }
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

fs::path ScratchDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("radiogen-acceptance-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

bool Near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// ---------------------------------------------------------------------------
// 1. ROUGE against brute-force scorers.

struct SmallSeq {
  std::vector<std::uint8_t> tokens;
  std::array<std::uint8_t, 3> uni{};
  std::array<std::uint8_t, 9> bi{};
  std::array<std::uint64_t, 3> masks{};
};

std::vector<SmallSeq> AllSequences(int max_len) {
  std::vector<SmallSeq> out;
  for (int len = 0; len <= max_len; ++len) {
    int total = 1;
    for (int i = 0; i < len; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
      SmallSeq s;
      int c = code;
      for (int i = 0; i < len; ++i) {
        s.tokens.push_back(static_cast<std::uint8_t>(c % 3));
        c /= 3;
      }
      for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        ++s.uni[s.tokens[i]];
        s.masks[s.tokens[i]] |= std::uint64_t{1} << i;
        if (i + 1 < s.tokens.size()) ++s.bi[s.tokens[i] * 3 + s.tokens[i + 1]];
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

// Bit-parallel LCS length (Hyyro's formulation), pattern `a`, text `b`.
std::size_t BitLcs(const SmallSeq& a, const SmallSeq& b) {
  const std::size_t m = a.tokens.size();
  if (m == 0 || b.tokens.empty()) return 0;
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  std::uint64_t v = full;
  for (std::uint8_t y : b.tokens) {
    const std::uint64_t u = v & a.masks[y];
    v = ((v + u) | (v - u)) & full;
  }
  return m - static_cast<std::size_t>(__builtin_popcountll(v));
}

Outcome CriterionRougeOracle() {
  Outcome o;
  const auto start = Clock::now();
  const std::vector<SmallSeq> seqs = AllSequences(8);
  std::size_t pairs = 0;
  double worst = 0.0;
  for (const SmallSeq& c : seqs) {
    const std::span<const std::uint8_t> cs(c.tokens);
    for (const SmallSeq& r : seqs) {
      const std::span<const std::uint8_t> rs(r.tokens);
      oracle::Counts u{0, c.tokens.size(), r.tokens.size()};
      for (int k = 0; k < 3; ++k) u.matches += std::min(c.uni[k], r.uni[k]);
      oracle::Counts b{0, c.tokens.empty() ? 0 : c.tokens.size() - 1,
                       r.tokens.empty() ? 0 : r.tokens.size() - 1};
      for (int k = 0; k < 9; ++k) b.matches += std::min(c.bi[k], r.bi[k]);
      const oracle::Counts l{BitLcs(r, c), c.tokens.size(), r.tokens.size()};

      const double e1 = std::fabs(rouge::RougeN(cs, rs, 1).f1 - oracle::F1FromCounts(u));
      const double e2 = std::fabs(rouge::RougeN(cs, rs, 2).f1 - oracle::F1FromCounts(b));
      const double el = std::fabs(rouge::RougeL(cs, rs).f1 - oracle::F1FromCounts(l));
      worst = std::max({worst, e1, e2, el});
      ++pairs;
    }
  }
  o.Check(worst <= 1e-12, "exhaustive pairs: worst f1 deviation " + std::to_string(worst));

  std::mt19937_64 rng(1);
  const std::vector<std::string> alphabet = {"肺", "结", "节", "CT", "影"};
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 2 + rng() % (alphabet.size() - 1);
    auto draw = [&](std::size_t len) {
      std::vector<std::string> s(len);
      for (std::string& t : s) t = alphabet[rng() % k];
      return s;
    };
    // One side stays short enough for subset enumeration; the other runs
    // long enough to take the sorted-merge path.
    std::vector<std::string> c = draw(9 + rng() % 6);
    std::vector<std::string> r = draw(9 + rng() % 40);
    if (rng() % 2) std::swap(c, r);
    const double e1 =
        std::fabs(rouge::RougeN(c, r, 1).f1 - oracle::F1FromCounts(oracle::NgramByPairing(c, r, 1)));
    const double e2 =
        std::fabs(rouge::RougeN(c, r, 2).f1 - oracle::F1FromCounts(oracle::NgramByPairing(c, r, 2)));
    const double el = std::fabs(rouge::RougeL(c, r).f1 -
                                oracle::F1FromCounts({oracle::LcsBySubsets(c, r), c.size(), r.size()}));
    worst = std::max({worst, e1, e2, el});
  }
  o.Check(worst <= 1e-12, "random longer pairs: worst f1 deviation " + std::to_string(worst));
  const double elapsed = Seconds(start);
  o.Check(elapsed < 60.0, "runtime " + std::to_string(elapsed) + " s");
  std::ostringstream d;
  d << pairs << " exhaustive + 1000 random pairs, worst |df1| " << worst << ", " << elapsed << " s";
  if (o.passed) o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------
// 2. ROUGE identities.

Outcome CriterionRougeIdentities() {
  Outcome o;
  std::mt19937_64 rng(2);
  const std::vector<std::string> left = {"肺", "部", "结", "节", "CT"};
  const std::vector<std::string> right = {"肝", "囊", "肿", "MRI", "胆"};
  auto draw = [&](const std::vector<std::string>& alphabet) {
    std::vector<std::string> s(1 + rng() % 40);
    for (std::string& t : s) t = alphabet[rng() % alphabet.size()];
    return s;
  };
  for (int i = 0; i < 500; ++i) {
    const auto x = draw(left);
    const rouge::RougeTriple t = rouge::ScoreTriple(x, x);
    o.Check(t.r1.f1 == 1.0 && t.rl.f1 == 1.0 && t.r1.recall == 1.0 && t.r1.precision == 1.0,
            "rouge(x,x) != 1 for R-1/R-L");
    o.Check(x.size() < 2 ? t.r2.f1 == 0.0 : t.r2.f1 == 1.0, "rouge-2(x,x) wrong");
    const auto y = draw(right);
    const rouge::RougeTriple d = rouge::ScoreTriple(x, y);
    o.Check(d.r1.f1 == 0.0 && d.r2.f1 == 0.0 && d.rl.f1 == 0.0, "disjoint pair scored non-zero");
    const auto z = draw(left);
    o.Check(rouge::RougeL(x, z).f1 == rouge::RougeL(z, x).f1, "ROUGE-L f1 not symmetric");
  }
  const inference::TokenSeq empty;
  const inference::TokenSeq one = {"肺"};
  for (const auto& [a, b] : std::vector<std::pair<inference::TokenSeq, inference::TokenSeq>>{
           {empty, empty}, {empty, one}, {one, empty}}) {
    const rouge::RougeTriple t = rouge::ScoreTriple(a, b);
    for (rouge::Variant v : rouge::kAllVariants) {
      const rouge::RougeScore& s = t.get(v);
      o.Check(s.f1 == 0.0 && s.recall == 0.0 && s.precision == 0.0, "0/0 case not zero");
    }
  }
  o.Check(rouge::RougeN(one, one, 2).f1 == 0.0, "bigram 0/0 not zero");
  if (o.passed) o.detail = "500 sequences, disjoint, symmetry and 0/0 cases";
  return o;
}

// ---------------------------------------------------------------------------
// 3. Cleaning.

Outcome CriterionCleaning() {
  Outcome o;
  const auto start = Clock::now();
  const corpus::IngestResult in =
      corpus::Ingest((kFixtures / "reports40.jsonl").string(), corpus::InputFormat::kJsonl);
  o.Check(in.corpus.size() == 40, "fixture does not hold 40 records");
  const corpus::WordSet words = corpus::LoadWordSet((kFixtures / "lexicon.txt").string());
  const corpus::CleanOptions options;

  const corpus::CleanResult once = corpus::CleanCorpus(in.corpus, words, options);
  const corpus::CleanResult twice = corpus::CleanCorpus(once.corpus, words, options);
  o.Check(once.corpus.records == twice.corpus.records && twice.rejects.empty(),
          "cleaning is not idempotent");

  const corpus::CleanResult deleted = corpus::DeleteMeaningless(in.corpus, words);
  for (const corpus::RadiologyReport& r : deleted.corpus.records) {
    for (const std::string& w : words.entries) {
      o.Check(r.finding.find(w) == std::string::npos && r.impression.find(w) == std::string::npos,
              "lexicon entry '" + w + "' survives in " + r.record_id);
    }
  }
  for (const corpus::RadiologyReport& r : once.corpus.records) {
    for (const std::string& w : words.entries) {
      o.Check(r.finding.find(w) == std::string::npos && r.impression.find(w) == std::string::npos,
              "lexicon entry survives the full chain in " + r.record_id);
    }
  }

  std::size_t brute = 0;
  const auto& recs = in.corpus.records;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (oracle::SquashSpaces(recs[i].finding) == oracle::SquashSpaces(recs[j].finding) &&
          oracle::SquashSpaces(recs[i].impression) == oracle::SquashSpaces(recs[j].impression)) {
        ++brute;
        break;
      }
    }
  }
  const std::size_t removed = in.corpus.size() - corpus::RemoveRepeatedValues(in.corpus).size();
  o.Check(removed == brute, "duplicates removed " + std::to_string(removed) + " vs brute force " +
                                std::to_string(brute));
  o.Check(brute > 0, "fixture plants no duplicates");
  const double elapsed = Seconds(start);
  o.Check(elapsed < 5.0, "runtime " + std::to_string(elapsed) + " s");
  if (o.passed) {
    o.detail = std::to_string(removed) + " duplicates, " + std::to_string(once.corpus.size()) +
               " records after cleaning";
  }
  return o;
}

// ---------------------------------------------------------------------------
// 4. Split and partition.

Outcome CriterionSplit() {
  Outcome o;
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 199;
    corpus::Corpus c;
    for (std::size_t i = 0; i < n; ++i) {
      corpus::RadiologyReport r;
      r.record_id = "c" + std::to_string(trial) + "-" + std::to_string(i);
      r.institution = i == 0 ? 1 : 1 + static_cast<int>(rng() % 6);
      r.finding = "f";
      r.impression = "i";
      c.records.push_back(r);
    }
    const std::uint64_t seed = rng();
    const corpus::TrainEvalSplit s = corpus::SplitTrainEval(c, 0.8, seed);
    std::multiset<std::string> train, eval, all;
    for (const auto& r : s.train.records) train.insert(r.record_id);
    for (const auto& r : s.eval.records) eval.insert(r.record_id);
    for (const auto& r : c.records) all.insert(r.record_id);
    std::vector<std::string> both;
    std::set_intersection(train.begin(), train.end(), eval.begin(), eval.end(),
                          std::back_inserter(both));
    o.Check(both.empty(), "train and eval overlap");
    std::multiset<std::string> uni = train;
    uni.insert(eval.begin(), eval.end());
    o.Check(uni == all, "train and eval do not cover the corpus");
    o.Check(s.train.size() == (4 * n) / 5, "train size is not floor(0.8 n) for n=" + std::to_string(n));

    const corpus::TrainEvalSplit again = corpus::SplitTrainEval(c, 0.8, seed);
    o.Check(again.train.records == s.train.records && again.eval.records == s.eval.records,
            "split is not deterministic under a fixed seed");

    const corpus::Partition p = corpus::PartitionByInstitution(c);
    std::size_t ok = 0;
    for (const auto& r : p.train_source.records) ok += r.institution == 1;
    for (const auto& r : p.external_test.records) ok += r.institution != 1;
    o.Check(ok == n && p.train_source.size() + p.external_test.size() == n,
            "institution partition is not an exact cover");
  }
  if (o.passed) o.detail = "100 corpora, sizes 2-200";
  return o;
}

// ---------------------------------------------------------------------------
// 5. Guarded generation.

prompt::SynthesizedPrompt MakePrompt(const std::string& id, const std::string& finding) {
  prompt::SynthesizedPrompt p;
  p.template_id = 1;
  p.record_id = id;
  p.input = finding;
  p.rendered_text = "Findings: " + finding;
  p.label = "右肺上叶结节";
  return p;
}

Outcome CriterionGeneration() {
  Outcome o;
  std::mt19937_64 rng(5);
  const std::vector<std::string> modes = {"echo", "null", "repeat", "label", "timeout", "error"};
  for (int trial = 0; trial < 300; ++trial) {
    inference::MockScript script;
    const std::size_t len = rng() % 8;
    for (std::size_t i = 0; i < len; ++i) script.sequence.push_back(modes[rng() % modes.size()]);
    script.default_mode = modes[rng() % modes.size()];
    inference::MockBackend backend("m", script);
    inference::GenerationConfig cfg;
    cfg.max_retries = static_cast<int>(rng() % 6);
    cfg.request_timeout = inference::Millis(1000.0);
    const auto out = inference::GenerateChecked(backend, MakePrompt("r1", "右肺上叶见结节"), cfg);
    o.Check(out.attempts >= 1 && out.attempts <= cfg.max_retries + 1, "attempt bound violated");
    o.Check(backend.total_calls() == out.attempts, "backend calls differ from attempts");
  }

  inference::GenerationConfig cfg;
  cfg.max_retries = 3;
  {
    inference::MockScript script;
    script.sequence = {"null", "null", "echo"};
    inference::MockBackend backend("m", script);
    const auto out = inference::GenerateChecked(backend, MakePrompt("r1", "右肺上叶见结节"), cfg);
    o.Check(out.attempts == 3 && out.succeeded() && out.impression_text == "右肺上叶见结节",
            "fail-twice-then-pass did not give attempts=3 and success");
  }
  {
    inference::MockScript script;
    script.default_mode = "null";
    inference::MockBackend backend("m", script);
    const auto out = inference::GenerateChecked(backend, MakePrompt("r1", "右肺上叶见结节"), cfg);
    o.Check(!out.succeeded() && out.failure == inference::FailureKind::kNullOutput &&
                out.attempts == cfg.max_retries + 1,
            "always-null script did not record a failure");
  }

  const inference::InferenceConfig config =
      inference::LoadInferenceConfig((kFixtures / "backends.json").string());
  const corpus::Corpus c = corpus::Ingest((kFixtures / "reports40.jsonl").string(),
                                          corpus::InputFormat::kJsonl).corpus;
  const std::vector<prompt::PromptTemplate> templates =
      prompt::LoadTemplates((kData / "templates.json").string());
  const auto prompts = prompt::SynthesizeBatch(templates.front(), c, true).prompts;
  for (const inference::BackendConfig& bc : config.backends) {
    auto render = [&](std::size_t parallel) {
      auto backend = inference::MakeBackend(bc);
      std::vector<Json> rows;
      for (const auto& out : inference::RunInference(*backend, prompts, config.generation, parallel)) {
        rows.push_back(inference::OutcomeToJson(out));
      }
      return RenderJsonl(rows, nullptr);
    };
    const std::string a = render(1);
    const std::string b = render(4);
    const std::string c2 = render(4);
    o.Check(a == b && b == c2, "inference for " + bc.backend_id + " is not bit-reproducible");
  }
  if (o.passed) o.detail = "300 random scripts plus scripted cases, 3 backends reproducible";
  return o;
}

// ---------------------------------------------------------------------------
// 6. Segmentation.

Outcome CriterionSegmentation() {
  Outcome o;
  const inference::CharacterSegmenter seg;
  const inference::TokenSeq expected = {"肺", "部", "结", "节", "CT", "平", "扫"};
  o.Check(seg.Segment("肺部结节CT平扫") == expected, "reference example segmented wrongly");
  const std::vector<std::string> pieces = {"肺", "结", "节", "影", "。", "，", " ", "\n", "CT",
                                           "MRI", "5", "mm", "-", "(", ")", "L4/5", "é", "ア",
                                           "、", "\t", "T2WI", "：", "x"};
  std::mt19937_64 rng(6);
  for (int i = 0; i < 1000; ++i) {
    std::string s;
    const std::size_t len = rng() % 30;
    for (std::size_t k = 0; k < len; ++k) s += pieces[rng() % pieces.size()];
    const inference::TokenSeq once = seg.Segment(s);
    const inference::TokenSeq twice = seg.Segment(inference::JoinTokens(once, " "));
    o.Check(once == twice, "rejoin-resegment changed tokens for '" + s + "'");
    for (const std::string& t : once) o.Check(!t.empty(), "empty token");
  }
  if (o.passed) o.detail = "reference example and 1000 random strings";
  return o;
}

// ---------------------------------------------------------------------------
// 7. Prompt selection.

int ExhaustiveArgmax(const std::map<int, selection::MeanF1>& scores, selection::SelectionKey key) {
  auto value = [&](const selection::MeanF1& s) {
    switch (key) {
      case selection::SelectionKey::kMeanRlF1:
        return s.rl;
      case selection::SelectionKey::kMeanR1F1:
        return s.r1;
      case selection::SelectionKey::kMeanOfThree:
        return (s.r1 + s.r2 + s.rl) / 3.0;
    }
    return 0.0;
  };
  int best = 0;
  for (const auto& [id, s] : scores) {
    bool beaten = false;
    for (const auto& [other, t] : scores) {
      if (value(t) > value(s) || (value(t) == value(s) && other < id)) beaten = true;
    }
    if (!beaten) best = id;
  }
  return best;
}

Outcome CriterionSelection() {
  Outcome o;
  const fs::path work = ScratchDir("select");
  const corpus::Corpus eval = corpus::LoadCorpus([&] {
    const auto in = corpus::Ingest((kFixtures / "selection_eval.jsonl").string(),
                                   corpus::InputFormat::kJsonl);
    const std::string path = (work / "eval.jsonl").string();
    corpus::WriteCorpus(path, in.corpus, Provenance{});
    return path;
  }());
  const auto templates = prompt::LoadTemplates((kData / "templates.json").string());
  selection::StubTrainer trainer((kFixtures / "stub_trainer.json").string());
  selection::SweepOptions options;
  options.work_dir = work.string();
  const selection::SweepResult sweep =
      selection::SmallEpochSweep(templates, trainer, eval, eval, options);
  o.Check(sweep.runs.size() == 5 && sweep.excluded.empty(), "sweep did not train all 5 templates");

  const Json stub = ParseJsonFile((kFixtures / "stub_trainer.json").string());
  for (const auto& [id, run] : sweep.runs) {
    const Json& responses = stub["backends"][std::to_string(id)]["script"]["responses"];
    oracle::F1Triple sum;
    for (const corpus::RadiologyReport& r : eval.records) {
      const oracle::F1Triple t =
          oracle::ScoreStrings(responses[r.record_id].get<std::string>(), r.impression);
      sum.r1 += t.r1;
      sum.r2 += t.r2;
      sum.rl += t.rl;
    }
    const double n = static_cast<double>(eval.size());
    o.Check(Near(run.scores.r1, sum.r1 / n, 1e-12) && Near(run.scores.r2, sum.r2 / n, 1e-12) &&
                Near(run.scores.rl, sum.rl / n, 1e-12),
            "template " + std::to_string(id) + " means differ from the independent scorer");
  }
  const auto scores = sweep.scores();
  const selection::PromptSelectionResult best = selection::FindBestPrompt(scores);
  o.Check(best.best_index == ExhaustiveArgmax(scores, selection::SelectionKey::kMeanRlF1),
          "sweep winner differs from exhaustive argmax");

  std::mt19937_64 rng(7);
  const std::vector<selection::SelectionKey> keys = {selection::SelectionKey::kMeanRlF1,
                                                     selection::SelectionKey::kMeanR1F1,
                                                     selection::SelectionKey::kMeanOfThree};
  // Dyadic values and coefficients keep every rescaled score exact.
  auto grid = [&] { return static_cast<double>(rng() % 17) / 16.0; };
  for (int trial = 0; trial < 500; ++trial) {
    std::map<int, selection::MeanF1> m;
    const int count = 1 + static_cast<int>(rng() % 5);
    for (int id = 1; id <= count; ++id) {
      if (id > 1 && rng() % 3 == 0) {
        m[id] = m[1 + static_cast<int>(rng() % (id - 1))];
      } else {
        const double v = grid();
        m[id] = {v, v, v};
        if (rng() % 2) m[id] = {grid(), grid(), v};
      }
    }
    for (selection::SelectionKey key : keys) {
      const int expected = ExhaustiveArgmax(m, key);
      o.Check(selection::FindBestPrompt(m, key).best_index == expected,
              "FindBestPrompt differs from exhaustive argmax");
      const double a = static_cast<double>(1 + rng() % 32) / 8.0;
      const double b = static_cast<double>(rng() % 33) / 16.0 - 1.0;
      std::map<int, selection::MeanF1> scaled;
      for (const auto& [id, s] : m) scaled[id] = {a * s.r1 + b, a * s.r2 + b, a * s.rl + b};
      o.Check(selection::FindBestPrompt(scaled, key).best_index == expected,
              "selection changed under positive affine rescaling");
    }
  }
  std::map<int, selection::MeanF1> tie = {{4, {0.3, 0.3, 0.5}}, {2, {0.1, 0.1, 0.5}}, {5, {0.9, 0.9, 0.4}}};
  o.Check(selection::FindBestPrompt(tie).best_index == 2, "tie not broken to the lowest id");
  if (o.passed) {
    o.detail = "winner template " + std::to_string(best.best_index) +
               ", 500 random score maps x 3 keys with rescaling";
  }
  return o;
}

// ---------------------------------------------------------------------------
// 8. Training configuration.

Outcome CriterionTrainingConfig() {
  Outcome o;
  const fs::path work = ScratchDir("job");
  const corpus::Corpus c = corpus::Ingest((kFixtures / "reports40.jsonl").string(),
                                          corpus::InputFormat::kJsonl).corpus;
  const auto templates = prompt::LoadTemplates((kData / "templates.json").string());
  std::vector<Json> rows;
  for (const auto& p : prompt::SynthesizeBatch(templates.front(), c, true).prompts) {
    rows.push_back(prompt::PromptToJson(p));
  }
  const std::string prompts_path = (work / "prompts.jsonl").string();
  WriteJsonl(prompts_path, rows, nullptr);

  const selection::TrainingJobSpec spec = selection::BuildTrainingJob(
      selection::TrainingConfig{}, prompts_path, selection::Stage::kFull, selection::JobOptions{});
  const Json j = selection::JobSpecToJson(spec);
  o.Check(selection::JobSpecFromJson(j) == spec, "in-memory round trip changed the spec");
  o.Check(selection::JobSpecFromJson(Json::parse(j.dump())) == spec, "text round trip changed the spec");
  const std::string path = (work / "job.json").string();
  selection::WriteJobSpec(path, spec);
  o.Check(selection::LoadJobSpec(path) == spec, "file round trip changed the spec");

  const Json expected = {{"quantization_bits", 4}, {"lora_r", 64},        {"lora_alpha", 16},
                         {"learning_rate", 1.41e-5}, {"batch_size", 64},  {"grad_accum_steps", 16},
                         {"epochs", 3},              {"max_seq_len", 512}};
  const Json cfg = ParseJsonFile(path)["config"];
  o.Check(cfg.size() == expected.size(), "config has unexpected keys");
  for (const auto& [k, v] : expected.items()) {
    o.Check(cfg.contains(k) && cfg[k] == v, "config value for '" + k + "' differs");
  }
  const selection::TrainingConfig& t = spec.config;
  o.Check(t.quantization_bits == 4 && t.lora_r == 64 && t.lora_alpha == 16 &&
              t.learning_rate == 1.41e-5 && t.batch_size == 64 && t.grad_accum_steps == 16 &&
              t.epochs == 3 && t.max_seq_len == 512,
          "default training config values differ");
  if (o.passed) o.detail = "bits=4 r=64 alpha=16 lr=1.41e-5 batch=64 accum=16 epochs=3 seq=512";
  return o;
}

// ---------------------------------------------------------------------------
// 9. Kernels.

double Norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Outcome CriterionKernels() {
  Outcome o;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst_norm = 0.0;
  double worst_add = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t d = 2 * (1 + rng() % 64);
    std::vector<double> x(d);
    for (double& v : x) v = u(rng);
    const std::int64_t p1 = static_cast<std::int64_t>(rng() % 2048);
    const std::int64_t p2 = static_cast<std::int64_t>(rng() % 2048);
    const auto y = kernels::Rope(x, p1);
    worst_norm = std::max(worst_norm, std::fabs(Norm(y) - Norm(x)) / Norm(x));
    const auto composed = kernels::Rope(kernels::Rope(x, p1), p2);
    const auto direct = kernels::Rope(x, p1 + p2);
    for (std::size_t k = 0; k < d; ++k) {
      worst_add = std::max(worst_add, std::fabs(composed[k] - direct[k]) / Norm(x));
    }
  }
  o.Check(worst_norm <= 1e-12, "rope norm drift " + std::to_string(worst_norm));
  o.Check(worst_add <= 1e-9, "rope angle additivity error " + std::to_string(worst_add));

  std::uniform_real_distribution<double> pos(0.1, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double c = pos(rng);
    const double eps = 1e-6;
    const std::vector<double> x(1 + rng() % 64, c);
    const double tol = eps / (c * c) + 1e-12;
    for (double v : kernels::RmsNorm(x, eps)) {
      o.Check(std::fabs(v - 1.0) <= tol, "rms_norm of a constant vector is not all ones");
    }
  }

  double worst_jac = 0.0;
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + rng() % 6;
    const std::size_t m = 1 + rng() % 6;
    kernels::Matrix W(n, m), V(n, m);
    for (double& v : W.data) v = w(rng);
    for (double& v : V.data) v = w(rng);
    std::vector<double> x(n), b(m), c(m);
    for (double& v : x) v = w(rng) * 2.0;
    for (double& v : b) v = w(rng);
    for (double& v : c) v = w(rng);
    const double beta = 0.5 + std::fabs(w(rng));

    // forward pass from the definition
    auto forward = [&](const std::vector<double>& in) {
      std::vector<double> out(m);
      for (std::size_t j = 0; j < m; ++j) {
        double g = b[j], l = c[j];
        for (std::size_t k = 0; k < n; ++k) {
          g += in[k] * W.data[k * m + j];
          l += in[k] * V.data[k * m + j];
        }
        out[j] = g / (1.0 + std::exp(-beta * g)) * l;
      }
      return out;
    };
    const auto lib = kernels::SwiGlu(x, W, V, b, c, beta);
    const auto ref = forward(x);
    for (std::size_t j = 0; j < m; ++j) {
      o.Check(std::fabs(lib[j] - ref[j]) <= 1e-12 * (1.0 + std::fabs(ref[j])), "swiglu forward differs");
    }
    const kernels::Matrix jac = kernels::SwiGluJacobian(x, W, V, b, c, beta);
    const double h = 1e-6;
    for (std::size_t k = 0; k < n; ++k) {
      auto xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const auto fp = forward(xp);
      const auto fm = forward(xm);
      for (std::size_t j = 0; j < m; ++j) {
        worst_jac = std::max(worst_jac, std::fabs((fp[j] - fm[j]) / (2 * h) - jac(j, k)));
      }
    }
  }
  o.Check(worst_jac <= 1e-5, "swiglu jacobian error " + std::to_string(worst_jac));
  if (o.passed) {
    std::ostringstream d;
    d << "rope norm " << worst_norm << ", additivity " << worst_add << ", swiglu jac " << worst_jac;
    o.detail = d.str();
  }
  return o;
}

// ---------------------------------------------------------------------------
// 10. Expert aggregation.

expert::ExpertScoreCard Card(const std::string& rater, expert::RaterLevel level,
                             const std::string& record, int value) {
  expert::ExpertScoreCard c;
  c.rater_id = rater;
  c.rater_level = level;
  c.record_id = record;
  c.backend_id = "chatradio-valuer";
  c.scores.fill(value);
  return c;
}

Outcome CriterionExpert() {
  Outcome o;
  for (int s = 0; s <= 100; ++s) {
    const int band = s < 20 ? 1 : s < 40 ? 2 : s < 60 ? 3 : s < 80 ? 4 : 5;
    o.Check(expert::QuintileOf(s) == band, "quintile wrong for " + std::to_string(s));
  }
  for (int bad : {-1, 101}) {
    bool threw = false;
    try {
      expert::QuintileOf(bad);
    } catch (const Error&) {
      threw = true;
    }
    o.Check(threw, "out-of-range score accepted");
  }

  const auto means = expert::AverageRaters({Card("a", expert::RaterLevel::kJunior, "r1", 60),
                                            Card("b", expert::RaterLevel::kIntermediate, "r1", 80),
                                            Card("c", expert::RaterLevel::kSenior, "r1", 100)});
  o.Check(means.size() == 1, "three raters of one record did not collapse to one row");
  for (double m : means.front().overall.mean) o.Check(m == 80.0, "(60,80,100) does not average to 80");

  const corpus::Corpus c = corpus::Ingest((kFixtures / "reports40.jsonl").string(),
                                          corpus::InputFormat::kJsonl).corpus;
  std::set<std::string> og, ihg, ohg;
  std::vector<expert::ExpertScoreCard> cards;
  std::mt19937_64 rng(10);
  for (const corpus::RadiologyReport& r : c.records) {
    if (expert::InScope(expert::Scope::kOg, r.institution)) og.insert(r.record_id);
    if (expert::InScope(expert::Scope::kIhg, r.institution)) ihg.insert(r.record_id);
    if (expert::InScope(expert::Scope::kOhg, r.institution)) ohg.insert(r.record_id);
    cards.push_back(Card("a", expert::RaterLevel::kSenior, r.record_id, static_cast<int>(rng() % 101)));
  }
  std::set<std::string> uni = ihg, inter;
  uni.insert(ohg.begin(), ohg.end());
  std::set_intersection(ihg.begin(), ihg.end(), ohg.begin(), ohg.end(),
                        std::inserter(inter, inter.begin()));
  o.Check(og.size() == c.size() && uni == og && inter.empty() && !ihg.empty() && !ohg.empty(),
          "IHG and OHG do not partition OG");
  const auto recs = expert::AverageRaters(cards);
  auto pooled = [&](expert::Scope s) {
    for (const auto& a : expert::ScopeAggregate(recs, s, c).aggregates) {
      if (!a.system) return a.n_records;
    }
    return std::size_t{0};
  };
  o.Check(pooled(expert::Scope::kIhg) + pooled(expert::Scope::kOhg) == pooled(expert::Scope::kOg),
          "aggregate record counts do not add up");

  const fs::path work = ScratchDir("expert");
  std::vector<expert::ScoringItem> items;
  for (std::size_t i = 0; i < 4; ++i) {
    items.push_back({c.records[i].record_id, "chatradio-valuer", c.records[i].finding,
                     c.records[i].impression});
  }
  std::string answers;
  for (int i = 0; i < 28; ++i) answers += std::to_string((i * 37) % 101) + "\n";
  const expert::RaterIdentity rater{"dr-a", expert::RaterLevel::kSenior};
  std::ostringstream sink;
  std::istringstream all(answers);
  const auto straight =
      expert::RunScoringSession(items, rater, (work / "straight.jsonl").string(), all, sink);
  const std::size_t cut = answers.find('\n', answers.size() / 2 + 3);  // mid-card
  std::istringstream first(answers.substr(0, cut + 1) + "banana\n");
  const std::string journal = (work / "resumed.jsonl").string();
  const auto part = expert::RunScoringSession(items, rater, journal, first, sink);
  const std::size_t consumed = part.entered * 7;
  std::string rest;
  {
    std::istringstream again(answers);
    std::string line;
    for (std::size_t i = 0; std::getline(again, line); ++i) {
      if (i >= consumed) rest += line + "\n";
    }
  }
  std::istringstream second(rest);
  const auto resumed = expert::RunScoringSession(items, rater, journal, second, sink);
  o.Check(part.remaining > 0 && resumed.replayed == part.entered, "session did not resume");
  o.Check(resumed.cards == straight.cards && straight.cards.size() == items.size(),
          "resumed session cards differ from an uninterrupted session");
  o.Check(expert::LoadJournal(journal).cards == straight.cards, "journal contents differ");
  if (o.passed) o.detail = "101 quintiles, 80.0 mean, scope partition, resume after " +
                           std::to_string(part.entered) + " cards";
  return o;
}

// ---------------------------------------------------------------------------
// 11. Table rendering.

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

rouge::ScoreTable GoldenTable() {
  rouge::ScoreTable t;
  auto add = [&](const std::string& backend, const std::string& scope, double r1, double r2,
                 double rl) {
    const double f[] = {r1, r2, rl};
    for (int v = 0; v < 3; ++v) {
      rouge::TableRow row;
      row.backend_id = backend;
      row.scope = scope;
      row.variant = rouge::kAllVariants[v];
      row.recall = f[v];
      row.precision = f[v];
      row.f1 = f[v];
      row.n = 100;
      t.rows.push_back(row);
    }
  };
  add("ChatRadio-Valuer", "institution-1", 0.46192, 0.28716, 0.44638);
  add("Llama2-7B-ft", "institution-1", 0.43244, 0.26801, 0.41806);
  add("ChatRadio-Valuer", "institution-2", 0.41234, 0.25001, 0.39996);
  add("Llama2-7B-ft", "institution-2", 0.41236, 0.25504, 0.38851);
  add("ChatRadio-Valuer", "chest", 0.50004, 0.32216, 0.48149);
  add("Llama2-7B-ft", "chest", 0.47731, 0.30266, 0.45513);
  add("ChatRadio-Valuer", "maxillofacial_neck", 0.39871, 0.21114, 0.37264);
  add("Llama2-7B-ft", "maxillofacial_neck", 0.40126, 0.20983, 0.37812);
  return t;
}

Outcome CriterionTables() {
  Outcome o;
  const rouge::ScoreTable t = GoldenTable();
  pipeline::ReportOptions options;
  options.backend_order = {"ChatRadio-Valuer", "Llama2-7B-ft"};
  const std::vector<std::pair<pipeline::Layout, std::string>> layouts = {
      {pipeline::Layout::kCrossInstitution, "cross_institution"},
      {pipeline::Layout::kPerSystem, "per_system"}};
  for (const auto& [layout, name] : layouts) {
    for (const auto& [format, ext] : std::vector<std::pair<pipeline::TableFormat, std::string>>{
             {pipeline::TableFormat::kMarkdown, ".md"}, {pipeline::TableFormat::kCsv, ".csv"}}) {
      const std::string got = pipeline::RenderReportTable(t, layout, format, nullptr, options);
      const fs::path golden = kGolden / (name + ext);
      o.Check(got == Slurp(golden), "mismatch against " + golden.filename().string());
    }
  }
  const std::string md = pipeline::RenderReportTable(t, pipeline::Layout::kCrossInstitution,
                                                     pipeline::TableFormat::kMarkdown, nullptr, options);
  o.Check(md.find("**0.4619**") != std::string::npos && md.find("**0.2872**") != std::string::npos &&
              md.find("**0.4464**") != std::string::npos,
          "reference row values not rendered as 0.4619/0.2872/0.4464");
  if (o.passed) o.detail = "4 golden files";
  return o;
}

// ---------------------------------------------------------------------------
// 12. End to end.

Outcome CriterionEndToEnd() {
  Outcome o;
  const fs::path work = ScratchDir("e2e");
  Json manifests[2];
  const auto start = Clock::now();
  for (int i = 0; i < 2; ++i) {
    const fs::path out = work / ("run" + std::to_string(i));
    const std::string cmd = "\"" + kCli + "\" -q run --config \"" +
                            (kFixtures / "pipeline.json").string() + "\" --output-dir \"" +
                            out.string() + "\"";
    const int rc = std::system(cmd.c_str());
    o.Check(rc == 0, "radiogen run exited with " + std::to_string(rc));
    if (rc != 0) return o;
    manifests[i] = ParseJsonFile((out / "manifest.json").string());
    for (const Json& e : manifests[i]["outputs"]) {
      o.Check(Sha256File((out / e["path"].get<std::string>()).string()) == e["sha256"],
              "manifest hash does not match file " + e["path"].get<std::string>());
    }
  }
  const double elapsed = Seconds(start);
  o.Check(manifests[0]["status"] == "ok", "pipeline status not ok");
  o.Check(manifests[0]["outputs"] == manifests[1]["outputs"] &&
              manifests[0]["config_hash"] == manifests[1]["config_hash"],
          "manifest hashes differ between runs");
  o.Check(manifests[0]["outputs"].size() > 10, "manifest lists too few outputs");
  o.Check(elapsed < 30.0, "two runs took " + std::to_string(elapsed) + " s");
  if (o.passed) {
    o.detail = std::to_string(manifests[0]["outputs"].size()) + " outputs identical, " +
               std::to_string(elapsed / 2) + " s per run";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"rouge_oracle_equivalence", CriterionRougeOracle},
      {"rouge_identities", CriterionRougeIdentities},
      {"cleaning_properties", CriterionCleaning},
      {"split_partition_properties", CriterionSplit},
      {"guarded_generation", CriterionGeneration},
      {"segmentation", CriterionSegmentation},
      {"prompt_selection", CriterionSelection},
      {"training_config_fidelity", CriterionTrainingConfig},
      {"kernel_properties", CriterionKernels},
      {"expert_aggregation", CriterionExpert},
      {"table_rendering", CriterionTables},
      {"end_to_end", CriterionEndToEnd},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.passed ? 0 : 1;
    std::cout << (o.passed ? "PASS" : "FAIL") << " [" << index << "] " << name << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
