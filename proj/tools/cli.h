// Copyright 2026 The ctxattack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CTXATTACK_TOOLS_CLI_H_
#define CTXATTACK_TOOLS_CLI_H_

#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include "ctxattack/embedding.h"
#include "ctxattack/models.h"

namespace ctxattack::cli {

// Exit codes of run_cli().
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPartialFailure = 2;

// Backend selector flag value:
//   toy            built-in deterministic backend
//   toy:<file>     toy backend loaded from a JSON fixture
//   http           remote backend at $MODEL_SERVER_URL
//   http:<url>     remote backend at <url>
struct Selector {
  enum class Kind { kToy, kHttp, kNull };
  Kind kind = Kind::kToy;
  std::string argument;  // fixture path or base URL; may be empty
};

// Throws std::invalid_argument naming `flag` on a malformed value.
Selector parse_selector(std::string_view flag, std::string_view value);

// Toy fixture JSON:
//   {"classes": [{"word": weight, ...}, ...],
//    "synonyms": {"word": [["candidate", prob], ...], ...}}
std::unique_ptr<TargetModel> make_target(const Selector& sel, int num_classes);
std::unique_ptr<MaskedLM> make_mlm(const Selector& sel,
                                   const EmbeddingStore& store);
std::unique_ptr<SentenceEncoder> make_encoder(
    const Selector& sel, std::shared_ptr<const EmbeddingStore> store);
std::unique_ptr<GrammarChecker> make_grammar(const Selector& sel);

// Subcommands: attack, rank, metrics. `argv[0]` is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace ctxattack::cli

#endif  // CTXATTACK_TOOLS_CLI_H_
