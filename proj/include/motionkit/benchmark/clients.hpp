#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "motionkit/benchmark/embedding.hpp"
#include "motionkit/util/hash.hpp"
#include "motionkit/util/json_util.hpp"

namespace motionkit::bench {

// A remote call failed or returned something outside its contract.
class ClientError : public Error {
 public:
  using Error::Error;
};

// JSON request/response endpoint; `service` names it in transcripts.
class JsonService {
 public:
  virtual ~JsonService() = default;
  virtual json call(const std::string& service, const json& request) const = 0;
};

// Answers from recorded transcripts: JSONL of
// {"service", "request", "response"} or {"service", "request", "error"}.
class ReplayService : public JsonService {
 public:
  explicit ReplayService(const std::vector<json>& exchanges) {
    for (const json& x : exchanges) {
      if (!x.contains("service") || !x.contains("request")) throw ParseError("transcript line needs service and request");
      Recorded r;
      if (x.contains("response")) r.response = x.at("response");
      if (x.contains("error")) r.error = x.at("error").get<std::string>();
      table_.emplace(key(x.at("service").get<std::string>(), x.at("request")), std::move(r));
    }
  }
  static ReplayService from_file(const std::string& path) { return ReplayService(read_jsonl_file(path)); }

  json call(const std::string& service, const json& request) const override {
    const auto it = table_.find(key(service, request));
    if (it == table_.end()) throw ClientError(service + ": no recorded exchange for request");
    if (it->second.error) throw ClientError(*it->second.error);
    return *it->second.response;
  }

 private:
  struct Recorded {
    std::optional<json> response;
    std::optional<std::string> error;
  };
  static std::string key(const std::string& service, const json& request) { return service + "\n" + request.dump(); }
  std::map<std::string, Recorded> table_;
};

// Forwards to another service and keeps every exchange. Lines come out
// sorted so the log does not depend on call interleaving.
class RecordingService : public JsonService {
 public:
  explicit RecordingService(const JsonService& inner) : inner_(inner) {}

  json call(const std::string& service, const json& request) const override {
    ordered_json line;
    line["service"] = service;
    line["request"] = request;
    try {
      json response = inner_.call(service, request);
      line["response"] = response;
      record(std::move(line));
      return response;
    } catch (const std::exception& e) {
      line["error"] = e.what();
      record(std::move(line));
      throw;
    }
  }

  std::string transcript_jsonl() const {
    std::lock_guard lock(mu_);
    std::vector<std::string> lines;
    for (const auto& l : lines_) lines.push_back(l.dump());
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
  }

 private:
  void record(ordered_json line) const {
    std::lock_guard lock(mu_);
    lines_.push_back(std::move(line));
  }
  const JsonService& inner_;
  mutable std::mutex mu_;
  mutable std::vector<ordered_json> lines_;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  // One unit vector per text, all of the same dimension.
  virtual std::vector<Embedding> embed(const std::vector<std::string>& texts) const = 0;
};

struct JudgeResponse {
  std::string choice;
  std::optional<double> score;
};

class JudgeClient {
 public:
  virtual ~JudgeClient() = default;
  // Must return one of the offered candidates.
  virtual JudgeResponse judge(const std::string& render_ref, const std::vector<std::string>& candidates) const = 0;
};

inline void check_embeddings(const std::vector<Embedding>& v, std::size_t expected) {
  if (v.size() != expected) throw ClientError("embedder returned " + std::to_string(v.size()) + " vectors for " +
                                              std::to_string(expected) + " texts");
  for (const auto& e : v) {
    if (e.empty() || e.size() != v.front().size()) throw ClientError("embedder returned inconsistent dimensions");
    if (std::abs(std::sqrt(dot(e, e)) - 1.0) > 1e-6) throw ClientError("embedder returned a non-unit vector");
  }
}

// {"texts": [...]} -> {"vectors": [[...]]}
class ServiceEmbedder : public EmbeddingProvider {
 public:
  explicit ServiceEmbedder(const JsonService& s) : service_(s) {}
  std::vector<Embedding> embed(const std::vector<std::string>& texts) const override {
    const json resp = service_.call("embedder", json{{"texts", texts}});
    std::vector<Embedding> out;
    try {
      out = resp.at("vectors").get<std::vector<Embedding>>();
    } catch (const json::exception& e) {
      throw ClientError(std::string("embedder: malformed response: ") + e.what());
    }
    check_embeddings(out, texts.size());
    return out;
  }

 private:
  const JsonService& service_;
};

// {"render_ref", "candidates"} -> {"choice", "score"?}
class ServiceJudge : public JudgeClient {
 public:
  explicit ServiceJudge(const JsonService& s) : service_(s) {}
  JudgeResponse judge(const std::string& render_ref, const std::vector<std::string>& candidates) const override {
    const json resp = service_.call("judge", json{{"render_ref", render_ref}, {"candidates", candidates}});
    JudgeResponse r;
    try {
      r.choice = resp.at("choice").get<std::string>();
      if (resp.contains("score") && !resp.at("score").is_null()) r.score = resp.at("score").get<double>();
    } catch (const json::exception& e) {
      throw ClientError(std::string("judge: malformed response: ") + e.what());
    }
    if (std::find(candidates.begin(), candidates.end(), r.choice) == candidates.end()) {
      throw ClientError("judge chose a label that was not offered");
    }
    return r;
  }

 private:
  const JsonService& service_;
};

// Offline embedder: signed feature hashing of lower-cased word tokens and
// word bigrams. Deterministic and dependency-free; texts sharing words land
// close together.
class HashingEmbedder : public EmbeddingProvider {
 public:
  explicit HashingEmbedder(std::size_t dim = 256) : dim_(dim) {
    if (dim == 0) throw InvalidArgument("embedding dimension must be > 0");
  }

  Embedding embed_one(const std::string& text) const {
    std::vector<std::string> words;
    std::string cur;
    for (char ch : text) {
      if (std::isalnum(static_cast<unsigned char>(ch))) {
        cur += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      } else if (!cur.empty()) {
        words.push_back(std::move(cur));
        cur.clear();
      }
    }
    if (!cur.empty()) words.push_back(std::move(cur));
    Embedding v(dim_, 0.0);
    auto add = [&](const std::string& feature, double w) {
      const std::uint64_t h = fnv1a64(feature);
      v[h % dim_] += (h >> 63) ? -w : w;
    };
    for (std::size_t i = 0; i < words.size(); ++i) {
      add(words[i], 1.0);
      if (i + 1 < words.size()) add(words[i] + " " + words[i + 1], 0.5);
    }
    if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) add("<empty>", 1.0);
    return normalized(std::move(v));
  }

  std::vector<Embedding> embed(const std::vector<std::string>& texts) const override {
    std::vector<Embedding> out;
    for (const auto& t : texts) out.push_back(embed_one(t));
    return out;
  }

 private:
  std::size_t dim_;
};

// Lets an in-process embedder answer embedder requests (used to record
// offline transcripts).
class EmbedderService : public JsonService {
 public:
  explicit EmbedderService(const EmbeddingProvider& e) : embedder_(e) {}
  json call(const std::string& service, const json& request) const override {
    if (service != "embedder") throw ClientError("service '" + service + "' not provided");
    return json{{"vectors", embedder_.embed(request.at("texts").get<std::vector<std::string>>())}};
  }

 private:
  const EmbeddingProvider& embedder_;
};

}  // namespace motionkit::bench
