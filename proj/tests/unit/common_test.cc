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

#include "common/csv.h"
#include "common/error.h"
#include "common/hash.h"
#include "common/jsonl.h"
#include "common/text.h"

namespace radiogen {
namespace {

namespace fs = std::filesystem;

TEST(TextTest, MalformedUtf8DecodesAsReplacement) {
  const std::string bad = "a\xC3(b\xE4\xB8";
  const auto cps = text::DecodeUtf8(bad);
  ASSERT_EQ(cps.size(), 6u);
  EXPECT_EQ(cps[0], U'a');
  EXPECT_EQ(cps[1], text::kReplacementChar);
  EXPECT_EQ(cps[2], U'(');
  EXPECT_EQ(cps[4], text::kReplacementChar);
  EXPECT_EQ(cps[5], text::kReplacementChar);
}

TEST(TextTest, RoundTripsCjk) {
  std::string out;
  for (char32_t cp : text::DecodeUtf8("肺部结节")) text::AppendUtf8(out, cp);
  EXPECT_EQ(out, "肺部结节");
}

TEST(TextTest, CollapseWhitespaceHandlesIdeographicSpace) {
  EXPECT_EQ(text::CollapseWhitespace("  右肺　 结节\n\t影 "), "右肺 结节 影");
  EXPECT_TRUE(text::IsBlank(" 　\n"));
}

TEST(TextTest, NormalizeNewlines) {
  EXPECT_EQ(text::NormalizeNewlines("a\r\nb\rc\n"), "a\nb\nc\n");
  EXPECT_EQ(text::NormalizeField("  a  \r\n b \n"), "a\n b");
}

TEST(TextTest, ReplaceAllIsSinglePass) {
  std::string s = "aabb";
  EXPECT_EQ(text::ReplaceAll(s, "ab", ""), 1u);
  EXPECT_EQ(s, "ab");
  EXPECT_EQ(text::CountOccurrences("aaaa", "aa"), 2u);
}

TEST(TextTest, FormatFixed) {
  EXPECT_EQ(text::FormatFixed(0.46192, 4), "0.4619");
  EXPECT_EQ(text::FormatFixed(0.99996, 4), "1.0000");
  EXPECT_EQ(text::FormatFixed(-0.00001, 4), "0.0000");
}

TEST(CsvTest, QuotedFieldsAndComments) {
  const auto rows = csv::Parse("\xEF\xBB\xBF# header comment\na,\"b,\"\"c\"\"\nd\"\n1,2\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].fields, (std::vector<std::string>{"a", "b,\"c\"\nd"}));
  EXPECT_EQ(rows[1].line_number, 4u);
}

TEST(CsvTest, UnterminatedQuoteIsValidationError) {
  try {
    csv::Parse("a,\"b\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
  }
}

TEST(CsvTest, JoinEscapesOnlyWhenNeeded) {
  EXPECT_EQ(csv::JoinRow({"a", "b c", "x,y", "q\"t"}), "a,b c,\"x,y\",\"q\"\"t\"");
  const auto back = csv::Parse(csv::JoinRow({"x,y", "q\"t", "l\nm"}) + "\n");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].fields, (std::vector<std::string>{"x,y", "q\"t", "l\nm"}));
}

TEST(HashTest, KnownVectors) {
  EXPECT_EQ(Sha256Hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256Hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(JsonlTest, ProvenanceHeaderIsLifted) {
  const fs::path p = fs::temp_directory_path() / "radiogen-jsonl-test" / "x.jsonl";
  Provenance prov;
  prov.config_hash = "abc";
  prov.seed = 7;
  prov.stage = "ingest";
  WriteJsonl(p.string(), {Json{{"a", 1}}, Json{{"a", 2}}}, &prov);
  const JsonlDocument doc = ReadJsonl(p.string());
  ASSERT_TRUE(doc.provenance.has_value());
  EXPECT_EQ((*doc.provenance)["seed"], 7);
  EXPECT_EQ((*doc.provenance)["tool"], "radiogen");
  EXPECT_FALSE(doc.provenance->contains("timestamp"));
  ASSERT_EQ(doc.lines.size(), 2u);
  EXPECT_EQ((*doc.lines[1].value)["a"], 2);
  fs::remove_all(p.parent_path());
}

TEST(JsonlTest, BadLineKeepsError) {
  const fs::path p = fs::temp_directory_path() / "radiogen-jsonl-bad.jsonl";
  WriteFile(p.string(), "{\"a\":1}\n\nnot json\n");
  const JsonlDocument doc = ReadJsonl(p.string());
  ASSERT_EQ(doc.lines.size(), 2u);
  EXPECT_FALSE(doc.lines[1].value.has_value());
  EXPECT_EQ(doc.lines[1].line_number, 3u);
  fs::remove(p);
}

TEST(JsonlTest, MissingFileIsIoError) {
  try {
    ReadJsonl("/nonexistent/radiogen.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}

TEST(JsonlTest, DocumentPutsProvenanceFirst) {
  Provenance prov;
  prov.config_hash = "h";
  const Json parsed = Json::parse(RenderJsonDocument(Json{{"z", 1}}, &prov));
  EXPECT_EQ(parsed.begin().key(), kProvenanceKey);
}

}  // namespace
}  // namespace radiogen
