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

#ifndef RADIOGEN_PIPELINE_STAGES_H_
#define RADIOGEN_PIPELINE_STAGES_H_

#include <iosfwd>
#include <string>

#include "common/jsonl.h"

// File-level stage entry points. Each takes an options object whose keys
// mirror the CLI flags and returns a JSON summary. Every file written starts
// with a provenance header. When options carry a "_provenance" object
// ({config_hash, seed}) it is used as is; otherwise the hash is taken over
// the options themselves.
namespace radiogen::pipeline {

// {in, format?: jsonl|csv, out, label?}
Json RunIngestStage(const Json& options);

// {in: path|[paths], lexicon, regex?, title_threshold?, title_min_support?,
//  out}
Json RunCleanStage(const Json& options);

// {in, ratio?, seed, out_dir}
// Writes train, eval, external, test (eval + external) corpora and the
// statistics table.
Json RunSplitStage(const Json& options);

// {templates, corpus, with_labels?, template_ids?: [int], out}
Json RunPromptsStage(const Json& options);

// {config, backend, prompts, parallel?, generation?: {...}, out}
Json RunInferStage(const Json& options);

// {outcomes: path|[paths], refs, group_by?: [institution|system|both|all],
//  averaging?: macro|micro, dictionary?, out, csv?, records_out?}
Json RunScoreStage(const Json& options);

// {templates, trainer, eval, train?, key?, small_epoch?, base_model?,
//  freeze_policy?, training?: {...}, generation?: {...}, parallel?, work_dir,
//  out, plan_out?}
Json RunSelectStage(const Json& options);

// {session, outcomes, corpus?, rater_id, rater_level, import?}
// Interactive unless `import` names a TSV file.
Json RunExpertScoreStage(const Json& options, std::istream& in, std::ostream& out);

// {journals: path|[paths], corpus, scope: og|ihg|ohg|all, out, json_out?}
Json RunExpertAggregateStage(const Json& options);

// {seed?, cases?}; summary has "passed".
Json RunKernelsSelftest(const Json& options);

// {kind: table, table, layout, format, out, backend_order?}
// {kind: utility, outcomes, info?, format, out}
Json RunReportStage(const Json& options);

}  // namespace radiogen::pipeline

#endif  // RADIOGEN_PIPELINE_STAGES_H_
