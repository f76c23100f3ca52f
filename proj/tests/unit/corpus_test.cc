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

#include <filesystem>

#include <gtest/gtest.h>

#include "common/error.h"
#include "common/jsonl.h"
#include "corpus/corpus.h"

namespace radiogen::corpus {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = RADIOGEN_FIXTURE_DIR;

RadiologyReport Make(const std::string& id, int inst, const std::string& finding,
                     const std::string& impression) {
  RadiologyReport r;
  r.record_id = id;
  r.institution = inst;
  r.finding = finding;
  r.impression = impression;
  return r;
}

Corpus Of(std::vector<RadiologyReport> records) {
  Corpus c;
  c.records = std::move(records);
  return c;
}

fs::path Scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("radiogen-corpus-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(ReportTest, ParsesSheetVariants) {
  const Json j = {{"record_id", 12},         {"institution", "3"}, {"system", "Musculoskeletal"},
                  {"modality", "MR"},        {"age", "45"},        {"sex", "M"},
                  {"finding", "右膝积液"}, {"impression", "关节积液"}};
  const RadiologyReport r = ReportFromJson(j);
  EXPECT_EQ(r.record_id, "12");
  EXPECT_EQ(r.institution, 3);
  EXPECT_EQ(r.system, BodySystem::kMuscleSkeleton);
  EXPECT_EQ(r.modality, Modality::kMri);
  EXPECT_EQ(r.sex, Sex::kMale);
  EXPECT_EQ(ReportFromJson(ReportToJson(r)), r);
}

TEST(ReportTest, RejectsOutOfRangeInstitution) {
  Json j = ReportToJson(Make("a", 1, "f", "i"));
  j["institution"] = 7;
  EXPECT_THROW(ReportFromJson(j), Error);
}

TEST(IngestTest, FixtureSheetsLoad) {
  const IngestResult a = Ingest((kFixtures / "sheets" / "sheet1.jsonl").string(), InputFormat::kJsonl);
  const IngestResult b = Ingest((kFixtures / "sheets" / "sheet2.csv").string(), InputFormat::kCsv);
  EXPECT_EQ(a.corpus.size(), 18u);
  EXPECT_TRUE(a.rejects.empty());
  EXPECT_GT(b.corpus.size(), 0u);
  EXPECT_EQ(b.corpus.records.front().finding.find("某某市"), 0u);
}

TEST(IngestTest, BadRowsBecomeRejects) {
  const fs::path dir = Scratch("ingest");
  const std::string path = (dir / "in.csv").string();
  WriteFile(path,
            "record_id,institution,system,modality,age,sex,finding,impression\n"
            "a,1,chest,CT,50,F,右肺结节,结节\n"
            "b,9,chest,CT,50,F,右肺结节,结节\n"
            "c,1,chest,CT\n");
  const IngestResult r = Ingest(path, InputFormat::kCsv);
  EXPECT_EQ(r.corpus.size(), 1u);
  ASSERT_EQ(r.rejects.size(), 2u);
  EXPECT_EQ(r.rejects[0].record_id, "b");
  EXPECT_EQ(r.rejects[1].line, 4u);
}

TEST(IngestTest, RepeatedRecordIdIsAnError) {
  const fs::path dir = Scratch("dup");
  const std::string path = (dir / "in.jsonl").string();
  const std::string row = ReportToJson(Make("a", 1, "f", "i")).dump();
  WriteFile(path, row + "\n" + row + "\n");
  EXPECT_THROW(Ingest(path, InputFormat::kJsonl), Error);
}

TEST(IngestTest, NoValidRowsIsAnError) {
  const fs::path dir = Scratch("empty");
  const std::string path = (dir / "in.jsonl").string();
  WriteFile(path, "{\"record_id\":\"a\"}\n");
  EXPECT_THROW(Ingest(path, InputFormat::kJsonl), Error);
}

TEST(IngestTest, CanonicalRoundTrip) {
  const fs::path dir = Scratch("canon");
  const Corpus c = Of({Make("a", 1, "右肺\n结节", "结节"), Make("b", 2, "肝囊肿", "囊肿")});
  Provenance prov;
  prov.label = "demo";
  WriteCorpus((dir / "c.jsonl").string(), c, prov);
  const Corpus back = LoadCorpus((dir / "c.jsonl").string());
  EXPECT_EQ(back.records, c.records);
  EXPECT_EQ(back.provenance, "demo");
}

TEST(CleaningTest, RepeatedValuesIgnoreWhitespace) {
  const Corpus c = Of({Make("a", 1, "右肺 结节", "结节"), Make("b", 1, " 右肺\n结节 ", "结节"),
                       Make("c", 1, "右肺结节", "结节")});
  const Corpus out = RemoveRepeatedValues(c);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out.records[0].record_id, "a");
  EXPECT_EQ(out.records[1].record_id, "c");
}

TEST(CleaningTest, RepeatedTitlesStrippedPerInstitution) {
  const Corpus c = Of({Make("a", 2, "XX医院报告\n右肺结节", "i"), Make("b", 2, "XX医院报告\n肝囊肿", "i"),
                       Make("c", 2, "XX医院报告\n胆囊炎", "i"), Make("d", 3, "XX医院报告\n脑萎缩", "i")});
  const Corpus out = RemoveRepeatedTitles(c, TitleOptions{});
  EXPECT_EQ(out.records[0].finding, "右肺结节");
  EXPECT_EQ(out.records[2].finding, "胆囊炎");
  EXPECT_EQ(out.records[3].finding, "XX医院报告\n脑萎缩");
}

TEST(CleaningTest, TitleNeverEmptiesAFinding) {
  const Corpus c = Of({Make("a", 2, "报告", "i"), Make("b", 2, "报告\n肝囊肿", "i")});
  const Corpus out = RemoveRepeatedTitles(c, TitleOptions{});
  EXPECT_EQ(out.records[0].finding, "报告");
  EXPECT_EQ(out.records[1].finding, "肝囊肿");
}

TEST(CleaningTest, DeleteToFixedPoint) {
  const WordSet w = MakeWordSet({"ab"});
  EXPECT_EQ(DeleteToFixedPoint("aabb", w), "");
  EXPECT_EQ(DeleteToFixedPoint("请结请结合临床合临床x", MakeWordSet({"请结合临床"})), "x");
}

TEST(CleaningTest, RegexLexicon) {
  const WordSet w = MakeWordSet({"检查号\\d+"}, true);
  EXPECT_EQ(DeleteToFixedPoint("检查号12345右肺结节", w), "右肺结节");
}

TEST(CleaningTest, BlankAfterDeletionIsRejected) {
  const CleanResult r =
      DeleteMeaningless(Of({Make("a", 1, "右肺结节", "请结合临床"), Make("b", 1, "肝", "囊肿")}),
                        MakeWordSet({"请结合临床"}));
  EXPECT_EQ(r.corpus.size(), 1u);
  ASSERT_EQ(r.rejects.size(), 1u);
  EXPECT_EQ(r.rejects[0].record_id, "a");
}

TEST(CleaningTest, MultiSheetPrefixesCollidingIds) {
  const std::vector<Corpus> parts = {Of({Make("1", 1, "f", "i"), Make("2", 1, "g", "j")}),
                                     Of({Make("1", 2, "h", "k")})};
  const Corpus out = SynthesizeMultiSheet(parts);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out.records[0].record_id, "p0:1");
  EXPECT_EQ(out.records[1].record_id, "2");
  EXPECT_EQ(out.records[2].record_id, "p1:1");
}

TEST(SplitTest, SizesAndErrors) {
  EXPECT_EQ(TrainCount(5, 0.8), 4u);
  EXPECT_EQ(TrainCount(317, 0.8), 253u);
  EXPECT_THROW(SplitTrainEval(Of({Make("a", 1, "f", "i")}), 0.8, 1), Error);
  EXPECT_THROW(SplitTrainEval(Of({Make("a", 1, "f", "i"), Make("b", 1, "f", "i")}), 1.0, 1), Error);
}

TEST(SplitTest, DifferentSeedsUsuallyDiffer) {
  std::vector<RadiologyReport> recs;
  for (int i = 0; i < 50; ++i) recs.push_back(Make(std::to_string(i), 1, "f", "i"));
  const Corpus c = Of(recs);
  EXPECT_NE(SeededPermutation(50, 1), SeededPermutation(50, 2));
  EXPECT_EQ(SeededPermutation(50, 3), SeededPermutation(50, 3));
}

TEST(SplitTest, PartitionWithoutInstitutionOneFails) {
  EXPECT_THROW(PartitionByInstitution(Of({Make("a", 2, "f", "i")})), Error);
}

TEST(StatsTest, ScaledTableOneFixture) {
  const Corpus c = Ingest((kFixtures / "table1_scaled.jsonl").string(), InputFormat::kJsonl).corpus;
  const CorpusStats s = ComputeStats(c);
  EXPECT_EQ(s.total, 333u);
  EXPECT_EQ(s.by_institution[0], 317u);
  EXPECT_EQ(s.by_institution[1], 12u);
  EXPECT_EQ(s.by_sex[0] + s.by_sex[1], 333u);
  EXPECT_EQ(s.by_modality[0] + s.by_modality[1], 333u);
  const Partition p = PartitionByInstitution(c);
  const TrainEvalSplit split = SplitTrainEval(p.train_source, 0.8, 42);
  EXPECT_EQ(split.train.size(), 253u);
  EXPECT_EQ(split.eval.size(), 64u);
  EXPECT_EQ(p.external_test.size(), 16u);
}

}  // namespace
}  // namespace radiogen::corpus
