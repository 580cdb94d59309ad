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

#include "corpusforge/bridge.hpp"

#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <semaphore>
#include <thread>

#include "corpusforge/audio.hpp"
#include "corpusforge/transcriptqc.hpp"
#include "corpusforge/utf8.hpp"
#include "httplib.h"

namespace corpusforge::bridge {
namespace {

std::string id_key(const json& id) { return id.dump(); }

BridgeError malformed(const std::string& what) {
  return BridgeError(BridgeErrc::MalformedResponse, what);
}

double number_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw malformed(std::string("missing numeric field '") + key + "'");
  }
  return it->get<double>();
}

}  // namespace

ServiceEndpoint parse_endpoint(std::string_view text, double timeout_s) {
  if (!(timeout_s > 0.0)) throw BridgeError(BridgeErrc::BadEndpoint, "timeout must be positive");
  ServiceEndpoint ep;
  ep.timeout_s = timeout_s;
  if (text == "mock" || text.starts_with("mock:")) {
    ep.kind = ServiceEndpoint::Kind::Mock;
    ep.address = text.size() > 5 ? std::string(text.substr(5)) : "";
  } else if (text.starts_with("exec:")) {
    ep.kind = ServiceEndpoint::Kind::Subprocess;
    ep.address = std::string(text.substr(5));
    if (ep.address.empty()) throw BridgeError(BridgeErrc::BadEndpoint, "empty command");
  } else if (text.starts_with("http://") || text.starts_with("https://")) {
    ep.kind = ServiceEndpoint::Kind::Http;
    ep.address = std::string(text);
  } else {
    throw BridgeError(BridgeErrc::BadEndpoint, "unrecognized endpoint '" + std::string(text) + "'");
  }
  return ep;
}

// ---------------------------------------------------------------------------

struct SubprocessTransport::Impl {
  int fd = -1;
  pid_t pid = -1;
  std::mutex write_mu;
  std::mutex pending_mu;
  std::map<std::string, std::promise<json>> pending;
  bool closed = false;
  std::counting_semaphore<1024> slots;
  std::thread reader;

  explicit Impl(int max_in_flight) : slots(std::clamp(max_in_flight, 1, 1024)) {}

  void read_loop() {
    std::string buf;
    char chunk[4096];
    while (true) {
      const ssize_t n = ::read(fd, chunk, sizeof(chunk));
      if (n <= 0) {
        if (n < 0 && errno == EINTR) continue;
        break;
      }
      buf.append(chunk, static_cast<std::size_t>(n));
      std::size_t nl;
      while ((nl = buf.find('\n')) != std::string::npos) {
        const std::string line = buf.substr(0, nl);
        buf.erase(0, nl + 1);
        if (line.empty()) continue;
        json msg = json::parse(line, nullptr, false);
        if (msg.is_discarded() || !msg.is_object() || !msg.contains("id")) continue;
        std::lock_guard lock(pending_mu);
        const auto it = pending.find(id_key(msg["id"]));
        if (it == pending.end()) continue;
        it->second.set_value(std::move(msg));
        pending.erase(it);
      }
    }
    std::lock_guard lock(pending_mu);
    closed = true;
    for (auto& [_, p] : pending) {
      p.set_exception(std::make_exception_ptr(
          BridgeError(BridgeErrc::ServiceError, "service process closed its output", "exited")));
    }
    pending.clear();
  }
};

SubprocessTransport::SubprocessTransport(const std::string& command, int max_in_flight)
    : impl_(std::make_unique<Impl>(max_in_flight)) {
  int sv[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
    throw BridgeError(BridgeErrc::BadEndpoint, "socketpair failed");
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(sv[0]);
    ::close(sv[1]);
    throw BridgeError(BridgeErrc::BadEndpoint, "fork failed");
  }
  if (pid == 0) {
    // Own process group, so that stopping the service also stops anything
    // the shell started.
    ::setpgid(0, 0);
    ::dup2(sv[1], STDIN_FILENO);
    ::dup2(sv[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(sv[1]);
  impl_->fd = sv[0];
  impl_->pid = pid;
  impl_->reader = std::thread([impl = impl_.get()] { impl->read_loop(); });
}

SubprocessTransport::~SubprocessTransport() {
  ::shutdown(impl_->fd, SHUT_WR);
  ::kill(-impl_->pid, SIGTERM);
  ::shutdown(impl_->fd, SHUT_RDWR);
  if (impl_->reader.joinable()) impl_->reader.join();
  ::close(impl_->fd);
  int status = 0;
  ::waitpid(impl_->pid, &status, 0);
}

json SubprocessTransport::round_trip(const json& request, double timeout_s) {
  const auto deadline =
      std::chrono::steady_clock::now() +
      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(timeout_s));
  if (!impl_->slots.try_acquire_until(deadline)) {
    throw BridgeError(BridgeErrc::Timeout, "no free request slot");
  }
  struct Release {
    Impl* impl;
    ~Release() { impl->slots.release(); }
  } release{impl_.get()};

  const std::string key = id_key(request.at("id"));
  std::future<json> reply;
  {
    std::lock_guard lock(impl_->pending_mu);
    if (impl_->closed) {
      throw BridgeError(BridgeErrc::ServiceError, "service process is not running", "exited");
    }
    reply = impl_->pending[key].get_future();
  }
  const std::string line = request.dump() + "\n";
  {
    std::lock_guard lock(impl_->write_mu);
    std::size_t off = 0;
    while (off < line.size()) {
      const ssize_t n = ::send(impl_->fd, line.data() + off, line.size() - off, MSG_NOSIGNAL);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        std::lock_guard plock(impl_->pending_mu);
        impl_->pending.erase(key);
        throw BridgeError(BridgeErrc::ServiceError, "write to service failed", "exited");
      }
      off += static_cast<std::size_t>(n);
    }
  }
  if (reply.wait_until(deadline) != std::future_status::ready) {
    std::lock_guard lock(impl_->pending_mu);
    impl_->pending.erase(key);
    throw BridgeError(BridgeErrc::Timeout, "no response within " + std::to_string(timeout_s) + " s");
  }
  return reply.get();
}

// ---------------------------------------------------------------------------

HttpTransport::HttpTransport(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  base_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
}

HttpTransport::~HttpTransport() = default;

json HttpTransport::round_trip(const json& request, double timeout_s) {
  httplib::Client cli(base_);
  const auto secs = static_cast<time_t>(timeout_s);
  const auto usecs = static_cast<time_t>((timeout_s - static_cast<double>(secs)) * 1e6);
  cli.set_connection_timeout(secs, usecs);
  cli.set_read_timeout(secs, usecs);
  cli.set_write_timeout(secs, usecs);
  const auto res = cli.Post(path_, request.dump(), "application/json");
  if (!res) {
    throw BridgeError(BridgeErrc::Timeout,
                      base_ + path_ + " unreachable: " + httplib::to_string(res.error()));
  }
  json body = json::parse(res->body, nullptr, false);
  if (res->status != 200) {
    std::string message = body.is_object() ? body.value("message", res->body) : res->body;
    throw BridgeError(BridgeErrc::ServiceError, "HTTP " + std::to_string(res->status) + ": " + message,
                      std::to_string(res->status));
  }
  if (body.is_discarded()) throw malformed("response body is not JSON");
  return body;
}

json FunctionTransport::round_trip(const json& request, double) {
  json response = handler_(request);
  if (response.is_object() && !response.contains("id")) response["id"] = request["id"];
  return response;
}

// ---------------------------------------------------------------------------

ServiceClient::ServiceClient(std::shared_ptr<Transport> transport, double timeout_s)
    : transport_(std::move(transport)), timeout_s_(timeout_s) {
  if (!(timeout_s_ > 0.0)) throw BridgeError(BridgeErrc::BadEndpoint, "timeout must be positive");
}

json ServiceClient::request(json body) {
  body["id"] = next_id_.fetch_add(1);
  json response = transport_->round_trip(body, timeout_s_);
  if (!response.is_object()) throw malformed("response is not an object");
  if (!response.contains("id") || response["id"] != body["id"]) {
    throw malformed("response id does not match request id");
  }
  if (response.contains("error")) {
    const auto& err = response["error"];
    const std::string status = err.is_string() ? err.get<std::string>() : err.dump();
    throw BridgeError(BridgeErrc::ServiceError,
                      status + ": " + response.value("message", std::string()), status);
  }
  return response;
}

std::shared_ptr<ServiceClient> make_client(const ServiceEndpoint& endpoint,
                                           FunctionTransport::Handler mock_handler) {
  std::shared_ptr<Transport> transport;
  switch (endpoint.kind) {
    case ServiceEndpoint::Kind::Subprocess:
      transport = std::make_shared<SubprocessTransport>(endpoint.address, endpoint.max_in_flight);
      break;
    case ServiceEndpoint::Kind::Http:
      transport = std::make_shared<HttpTransport>(endpoint.address);
      break;
    case ServiceEndpoint::Kind::Mock:
      if (!mock_handler) throw BridgeError(BridgeErrc::BadEndpoint, "no mock for this service");
      transport = std::make_shared<FunctionTransport>(std::move(mock_handler));
      break;
  }
  return std::make_shared<ServiceClient>(std::move(transport), endpoint.timeout_s);
}

// ---------------------------------------------------------------------------

AsrResult parse_asr_response(const json& response) {
  if (!response.is_object()) throw malformed("ASR response is not an object");
  const auto words = response.find("words");
  if (words == response.end() || !words->is_array()) throw malformed("missing 'words' array");
  AsrResult out;
  std::string joined;
  for (const auto& w : *words) {
    if (!w.is_object() || !w.contains("word") || !w["word"].is_string()) {
      throw malformed("word entry without 'word'");
    }
    WordAlignment a;
    a.word = w["word"].get<std::string>();
    a.start_s = number_field(w, "start_s");
    a.end_s = number_field(w, "end_s");
    a.confidence = number_field(w, "confidence");
    if (!(a.end_s >= a.start_s) || a.start_s < 0.0) {
      throw malformed("word '" + a.word + "' ends before it starts");
    }
    if (!(a.confidence >= 0.0 && a.confidence <= 1.0)) {
      throw malformed("word '" + a.word + "' confidence outside [0, 1]");
    }
    if (!out.words.empty() && a.start_s < out.words.back().end_s) {
      throw malformed("word '" + a.word + "' overlaps its predecessor");
    }
    if (a.word.empty() || utf8::split_words(a.word).size() != 1) {
      throw malformed("word token must be one non-empty word");
    }
    if (!joined.empty()) joined.push_back(' ');
    joined += a.word;
    out.words.push_back(std::move(a));
  }
  const auto text = response.find("text");
  if (text == response.end() || !text->is_string()) throw malformed("missing 'text'");
  out.text = text->get<std::string>();
  if (out.text != joined) throw malformed("'text' is not the space-join of the words");
  return out;
}

json asr_to_json(const AsrResult& result) {
  json words = json::array();
  for (const auto& w : result.words) {
    words.push_back({{"word", w.word}, {"start_s", w.start_s}, {"end_s", w.end_s},
                     {"confidence", w.confidence}});
  }
  return {{"words", std::move(words)}, {"text", result.text}};
}

AsrResult transcribe(ServiceClient& client, const std::filesystem::path& audio) {
  return parse_asr_response(client.request({{"audio", audio.string()}}));
}

std::vector<std::string> comparable_words(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& token : utf8::split_words(text)) {
    std::string w;
    for (char32_t cp : utf8::decode_lossy(token)) {
      if (!utf8::is_punct(cp)) utf8::append(w, utf8::to_lower(cp));
    }
    if (!w.empty()) out.push_back(std::move(w));
  }
  return out;
}

std::string punctuate(ServiceClient& client, std::string_view text) {
  if (utf8::split_words(text).empty()) return "";
  const json response = client.request({{"text", std::string(text)}});
  const auto it = response.find("text");
  if (it == response.end() || !it->is_string()) throw malformed("missing 'text'");
  std::string out = it->get<std::string>();
  if (comparable_words(out) != comparable_words(text)) {
    throw malformed("punctuation changed the word sequence");
  }
  return out;
}

speaker::SpeakerEmbedding embed(ServiceClient& client, const std::filesystem::path& audio,
                                std::size_t expected_dim) {
  const json response = client.request({{"audio", audio.string()}});
  const auto it = response.find("embedding");
  if (it == response.end() || !it->is_array() || it->empty()) {
    throw malformed("missing 'embedding' array");
  }
  std::vector<double> values;
  values.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_number()) throw malformed("non-numeric embedding value");
    values.push_back(v.get<double>());
  }
  if (expected_dim != 0 && values.size() != expected_dim) {
    throw malformed("embedding has dimension " + std::to_string(values.size()) + ", expected " +
                    std::to_string(expected_dim));
  }
  try {
    return speaker::SpeakerEmbedding(std::move(values), response.value("model_id", ""));
  } catch (const speaker::SpeakerError&) {
    throw BridgeError(BridgeErrc::ZeroVector, "embedding is the zero vector");
  }
}

double min_word_confidence(const AsrResult& result) {
  if (result.words.empty()) throw BridgeError(BridgeErrc::EmptyResult, "no words recognized");
  double m = 1.0;
  for (const auto& w : result.words) m = std::min(m, w.confidence);
  return m;
}

std::filesystem::path words_sidecar(const std::filesystem::path& audio) {
  return audio.string() + ".words.json";
}

void write_words_sidecar(const std::filesystem::path& audio, const AsrResult& result) {
  std::ofstream out(words_sidecar(audio), std::ios::trunc);
  if (!out) throw IoError(IoErrc::OpenFailed, words_sidecar(audio).string());
  out << asr_to_json(result).dump() << '\n';
}

json mock_asr_handler(const json& request) {
  const auto path = words_sidecar(request.at("audio").get<std::string>());
  std::ifstream in(path);
  if (!in) {
    return {{"id", request["id"]}, {"error", "not_found"},
            {"message", "no alignment sidecar " + path.string()}};
  }
  json response = json::parse(in, nullptr, false);
  if (response.is_discarded()) {
    return {{"id", request["id"]}, {"error", "bad_sidecar"}, {"message", path.string()}};
  }
  response["id"] = request["id"];
  return response;
}

json mock_punct_handler(const json& request) {
  const std::string text = request.at("text").get<std::string>();
  return {{"id", request["id"]}, {"text", transcript::ensure_terminal_punct(text)}};
}

FunctionTransport::Handler mock_embed_handler(std::size_t dim) {
  return [dim](const json& request) -> json {
    const auto audio = read_wav(request.at("audio").get<std::string>());
    const auto e = speaker::mock_embed(audio, dim);
    return {{"id", request["id"]}, {"embedding", e.values()}, {"model_id", e.model_id()}};
  };
}

}  // namespace corpusforge::bridge
