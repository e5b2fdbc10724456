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

#include "ctxattack/http_backends.h"

#include <charconv>
#include <stdexcept>
#include <string>

#include "httplib.h"
#include "json.hpp"

namespace ctxattack {
namespace {

using nlohmann::json;

json post_json(const ServerUrl& url, const HttpOptions& options,
               const std::string& endpoint, const json& body) {
  const std::string path = url.prefix + endpoint;
  const std::string payload = body.dump();
  std::string last_error;
  for (int attempt = 0; attempt <= options.retries; ++attempt) {
    httplib::Client client(url.host, url.port);
    client.set_connection_timeout(options.connect_timeout_sec, 0);
    client.set_read_timeout(options.read_timeout_sec, 0);
    const auto res = client.Post(path, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    json parsed = json::parse(res->body, nullptr, /*allow_exceptions=*/false);
    if (res->status != 200) {
      std::string message = "HTTP " + std::to_string(res->status);
      if (parsed.is_object() && parsed.contains("error") &&
          parsed["error"].is_string()) {
        message += ": " + parsed["error"].get<std::string>();
      }
      throw BackendError(url.to_string() + endpoint + " failed: " + message);
    }
    if (parsed.is_discarded() || !parsed.is_object()) {
      throw BackendError(url.to_string() + endpoint + ": malformed JSON response");
    }
    return parsed;
  }
  throw BackendError(url.to_string() + endpoint + " unreachable: " + last_error);
}

template <typename T>
T field(const json& obj, const char* name, const std::string& endpoint) {
  if (!obj.contains(name)) {
    throw BackendError(endpoint + ": response missing '" + name + "'");
  }
  try {
    return obj.at(name).get<T>();
  } catch (const json::exception& e) {
    throw BackendError(endpoint + ": bad '" + name + "' field: " + e.what());
  }
}

}  // namespace

std::string ServerUrl::to_string() const {
  return "http://" + host + ":" + std::to_string(port) + prefix;
}

ServerUrl parse_server_url(std::string_view url) {
  constexpr std::string_view kScheme = "http://";
  if (!url.starts_with(kScheme)) {
    throw std::invalid_argument("'" + std::string(url) +
                                "' is not an absolute http:// URL");
  }
  std::string_view rest = url.substr(kScheme.size());
  const std::size_t slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  ServerUrl out;
  if (slash != std::string_view::npos) {
    std::string_view prefix = rest.substr(slash);
    while (!prefix.empty() && prefix.back() == '/') prefix.remove_suffix(1);
    out.prefix = std::string(prefix);
  }
  const std::size_t colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    const std::string_view port = authority.substr(colon + 1);
    int value = 0;
    const auto [ptr, ec] =
        std::from_chars(port.data(), port.data() + port.size(), value);
    if (ec != std::errc() || ptr != port.data() + port.size() || value <= 0 ||
        value > 65535) {
      throw std::invalid_argument("bad port in URL '" + std::string(url) + "'");
    }
    out.port = value;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) {
    throw std::invalid_argument("missing host in URL '" + std::string(url) + "'");
  }
  out.host = std::string(authority);
  return out;
}

HttpTargetModel::HttpTargetModel(ServerUrl url, int num_classes,
                                 HttpOptions options)
    : url_(std::move(url)), num_classes_(num_classes), options_(options) {}

ClassDistribution HttpTargetModel::classify(const TaskInput& input) const {
  json body;
  body["task"] = std::string(to_string(input.task()));
  const std::string text = detokenize(input.attacked());
  if (input.task() == Task::kClassification) {
    body["texts"] = json::array({text});
  } else {
    body["pairs"] = json::array(
        {json{{"premise", input.premise().value_or("")}, {"hypothesis", text}}});
  }
  const json res = post_json(url_, options_, "/classify", body);
  const auto rows = field<std::vector<std::vector<double>>>(res, "probs", "/classify");
  if (rows.size() != 1) {
    throw BackendError("/classify: expected 1 probability row, got " +
                       std::to_string(rows.size()));
  }
  if (num_classes_ > 0 && static_cast<int>(rows[0].size()) != num_classes_) {
    throw BackendError("/classify: expected " + std::to_string(num_classes_) +
                       " classes, got " + std::to_string(rows[0].size()));
  }
  return ClassDistribution::from_probs(rows[0]);
}

HttpMaskedLM::HttpMaskedLM(ServerUrl url, HttpOptions options)
    : url_(std::move(url)), options_(options) {}

std::vector<Candidate> HttpMaskedLM::predict(const Document& original,
                                             const Document& masked,
                                             int top_k) const {
  const json body = {{"original", detokenize(original)},
                     {"masked", detokenize(masked)},
                     {"top_k", top_k}};
  const json res = post_json(url_, options_, "/fill_mask", body);
  const auto items = field<json>(res, "candidates", "/fill_mask");
  if (!items.is_array()) throw BackendError("/fill_mask: 'candidates' is not a list");
  std::vector<Candidate> out;
  out.reserve(items.size());
  for (const json& item : items) {
    if (!item.is_object()) throw BackendError("/fill_mask: bad candidate entry");
    out.push_back(Candidate{field<std::string>(item, "token", "/fill_mask"),
                            field<double>(item, "prob", "/fill_mask"),
                            std::nullopt});
  }
  return out;
}

HttpSentenceEncoder::HttpSentenceEncoder(ServerUrl url, HttpOptions options)
    : url_(std::move(url)), options_(options) {}

double HttpSentenceEncoder::similarity(std::string_view a,
                                       std::string_view b) const {
  const json body = {{"a", std::string(a)}, {"b", std::string(b)}};
  const json res = post_json(url_, options_, "/similarity", body);
  return field<double>(res, "score", "/similarity");
}

HttpGrammarChecker::HttpGrammarChecker(ServerUrl url, HttpOptions options)
    : url_(std::move(url)), options_(options) {}

int HttpGrammarChecker::count_errors(std::string_view text) const {
  if (text.empty()) return 0;
  const json body = {{"text", std::string(text)}};
  const json res = post_json(url_, options_, "/grammar", body);
  return field<int>(res, "error_count", "/grammar");
}

}  // namespace ctxattack
