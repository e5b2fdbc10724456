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

#ifndef CTXATTACK_HTTP_BACKENDS_H_
#define CTXATTACK_HTTP_BACKENDS_H_

#include <string>
#include <string_view>
#include <vector>

#include "ctxattack/models.h"

namespace ctxattack {

// "http://host[:port][/prefix]". Only plain http is supported.
struct ServerUrl {
  std::string host;
  int port = 80;
  std::string prefix;  // no trailing slash; empty or "/..."

  std::string to_string() const;
};

// Throws std::invalid_argument unless `url` is an absolute http URL.
ServerUrl parse_server_url(std::string_view url);

// Options shared by the remote backends. A request is retried on transport
// failures only; every endpoint is idempotent.
struct HttpOptions {
  int retries = 2;
  int connect_timeout_sec = 5;
  int read_timeout_sec = 120;
};

class HttpTargetModel : public TargetModel {
 public:
  // num_classes = 0 disables the class-count check.
  HttpTargetModel(ServerUrl url, int num_classes, HttpOptions options = {});
  ClassDistribution classify(const TaskInput& input) const override;

 private:
  ServerUrl url_;
  int num_classes_;
  HttpOptions options_;
};

class HttpMaskedLM : public MaskedLM {
 public:
  explicit HttpMaskedLM(ServerUrl url, HttpOptions options = {});
  std::vector<Candidate> predict(const Document& original,
                                 const Document& masked,
                                 int top_k) const override;

 private:
  ServerUrl url_;
  HttpOptions options_;
};

class HttpSentenceEncoder : public SentenceEncoder {
 public:
  explicit HttpSentenceEncoder(ServerUrl url, HttpOptions options = {});
  double similarity(std::string_view a, std::string_view b) const override;

 private:
  ServerUrl url_;
  HttpOptions options_;
};

class HttpGrammarChecker : public GrammarChecker {
 public:
  explicit HttpGrammarChecker(ServerUrl url, HttpOptions options = {});
  int count_errors(std::string_view text) const override;

 private:
  ServerUrl url_;
  HttpOptions options_;
};

}  // namespace ctxattack

#endif  // CTXATTACK_HTTP_BACKENDS_H_
