// Copyright (c) 2026 The corpusforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "corpusforge/alignment.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/speakerid.hpp"
#include "json.hpp"

// Clients for the external neural services (ASR with word timestamps,
// punctuation restoration, speaker embedding). The wire format is one JSON
// object per request/response: newline-delimited over a subprocess's stdio,
// or a POST body over HTTP. Every response is validated before use.
namespace corpusforge::bridge {

using nlohmann::json;

enum class BridgeErrc {
  Timeout,
  MalformedResponse,
  ServiceError,
  EmptyResult,
  ZeroVector,
  BadEndpoint
};

constexpr std::string_view to_string(BridgeErrc kind) {
  switch (kind) {
    case BridgeErrc::Timeout: return "Timeout";
    case BridgeErrc::MalformedResponse: return "MalformedResponse";
    case BridgeErrc::ServiceError: return "ServiceError";
    case BridgeErrc::EmptyResult: return "EmptyResult";
    case BridgeErrc::ZeroVector: return "ZeroVector";
    case BridgeErrc::BadEndpoint: return "BadEndpoint";
  }
  return "BridgeError";
}

/// `status` carries the service's error code (or HTTP status) for
/// ServiceError.
class BridgeError : public KindedError<BridgeErrc> {
 public:
  BridgeError(BridgeErrc kind, const std::string& detail, std::string status = "")
      : KindedError(kind, detail), status_(std::move(status)) {}
  const std::string& status() const { return status_; }

 private:
  std::string status_;
};

struct ServiceEndpoint {
  enum class Kind { Subprocess, Http, Mock };
  Kind kind = Kind::Mock;
  std::string address;  // shell command, URL, or mock name
  double timeout_s = 30.0;
  int max_in_flight = 4;
};

/// "mock[:name]", "exec:<shell command>", or an http:// URL.
ServiceEndpoint parse_endpoint(std::string_view text, double timeout_s = 30.0);

/// Moves one request to a service and returns its response. Implementations
/// must be safe to call from several threads.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual json round_trip(const json& request, double timeout_s) = 0;
};

/// NDJSON over the stdin/stdout of a long-lived child process. Responses are
/// matched to requests by "id", so several requests may be in flight.
class SubprocessTransport final : public Transport {
 public:
  SubprocessTransport(const std::string& command, int max_in_flight);
  ~SubprocessTransport() override;
  json round_trip(const json& request, double timeout_s) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// JSON POST bodies to a single URL.
class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(const std::string& url);
  ~HttpTransport() override;
  json round_trip(const json& request, double timeout_s) override;

 private:
  std::string base_;
  std::string path_;
};

/// In-process handler. The handler sees the request (with "id") and its
/// return value is used as the response; a missing "id" is filled in.
class FunctionTransport final : public Transport {
 public:
  using Handler = std::function<json(const json&)>;
  explicit FunctionTransport(Handler handler) : handler_(std::move(handler)) {}
  json round_trip(const json& request, double timeout_s) override;

 private:
  Handler handler_;
};

/// Adds request ids, enforces the timeout and maps error responses.
class ServiceClient {
 public:
  ServiceClient(std::shared_ptr<Transport> transport, double timeout_s);
  json request(json body);

 private:
  std::shared_ptr<Transport> transport_;
  double timeout_s_;
  std::atomic<long long> next_id_{1};
};

std::shared_ptr<ServiceClient> make_client(const ServiceEndpoint& endpoint,
                                           FunctionTransport::Handler mock_handler = {});

struct AsrResult {
  WordList words;
  std::string text;
};

AsrResult parse_asr_response(const json& response);
json asr_to_json(const AsrResult& result);

AsrResult transcribe(ServiceClient& client, const std::filesystem::path& audio);

/// Empty or whitespace-only text returns "" without contacting the service.
std::string punctuate(ServiceClient& client, std::string_view text);

speaker::SpeakerEmbedding embed(ServiceClient& client, const std::filesystem::path& audio,
                                std::size_t expected_dim = 0);

/// Smallest per-word confidence. Throws EmptyResult.
double min_word_confidence(const AsrResult& result);

inline constexpr double kDefaultWordConfMin = 0.95;

/// Word sequence with punctuation and case ignored.
std::vector<std::string> comparable_words(std::string_view text);

// ---------------------------------------------------------------------------
// Deterministic mocks used by tests and the offline CLI mode.

/// Path of the alignment sidecar for an audio file ("<audio>.words.json").
std::filesystem::path words_sidecar(const std::filesystem::path& audio);
void write_words_sidecar(const std::filesystem::path& audio, const AsrResult& result);

/// Answers transcribe requests from the alignment sidecar.
json mock_asr_handler(const json& request);
/// Echoes the text, appending "." when it lacks a terminal mark.
json mock_punct_handler(const json& request);
/// Computes speaker::mock_embed on the referenced WAV file.
FunctionTransport::Handler mock_embed_handler(std::size_t dim);

}  // namespace corpusforge::bridge
