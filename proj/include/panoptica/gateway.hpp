#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "panoptica/store.hpp"
#include "panoptica/traversal.hpp"

namespace panoptica {

inline constexpr int kDefaultPort = 8750;
inline constexpr std::size_t kDefaultLimit = 500;
inline constexpr const char* kDataDirVariable = "PANOPTICA_DATA_DIR";

struct DataPaths {
  std::filesystem::path vocabulary;
  std::filesystem::path store;
};

/// vocabulary.json and store.json inside `dir`.
DataPaths data_paths(const std::filesystem::path& dir);

/// $PANOPTICA_DATA_DIR when set, else the working directory.
std::filesystem::path default_data_dir();

/// The vocabulary and the current store snapshot. Readers get an immutable
/// snapshot; writers run one at a time on a copy that is persisted and then
/// installed.
class Engine {
 public:
  Engine(std::shared_ptr<const Vocabulary> vocab, Store store,
         std::optional<std::filesystem::path> store_file = std::nullopt);

  /// Loads the vocabulary (required) and the store (empty when absent).
  static std::shared_ptr<Engine> open(const DataPaths& paths);

  const Vocabulary& vocabulary() const { return *vocab_; }
  std::shared_ptr<const Store> snapshot() const;

  template <class F>
  auto write(F&& mutate) {
    std::lock_guard writer(write_mutex_);
    auto next = std::make_shared<Store>(*snapshot());
    if constexpr (std::is_void_v<decltype(mutate(*next))>) {
      mutate(*next);
      install(std::move(next));
    } else {
      auto result = mutate(*next);
      install(std::move(next));
      return result;
    }
  }

 private:
  void install(std::shared_ptr<Store> next);

  std::shared_ptr<const Vocabulary> vocab_;
  std::optional<std::filesystem::path> store_file_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const Store> current_;
  std::mutex write_mutex_;
};

/// Navigation sessions keyed by random tokens, dropped after an idle period.
class SessionTable {
 public:
  using Clock = std::chrono::steady_clock;

  struct Entry {
    std::mutex mutex;
    Session session;
    Clock::time_point last_used;
  };

  explicit SessionTable(Clock::duration idle_limit = std::chrono::hours(1))
      : idle_limit_(idle_limit) {}

  std::string create(Clock::time_point now = Clock::now());
  /// Throws UnknownSession for unknown or expired tokens.
  std::shared_ptr<Entry> find(const std::string& token, Clock::time_point now = Clock::now());
  std::size_t size() const;

 private:
  void expire(Clock::time_point now);

  Clock::duration idle_limit_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>, std::less<>> sessions_;
};

/// Random token of 16 bytes, hex-encoded.
std::string new_session_token();

struct GatewayOptions {
  std::chrono::seconds session_idle{3600};
  std::size_t default_limit = kDefaultLimit;
};

/// HTTP service over an Engine.
class Gateway {
 public:
  explicit Gateway(std::shared_ptr<Engine> engine, GatewayOptions options = {});
  ~Gateway();
  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  /// Binds the listening socket; port 0 picks a free port. Returns the bound
  /// port or throws BindFailure.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Requires bind().
  void run();
  void stop();
  /// Blocks until run() is accepting connections.
  void wait_until_ready() const;

  Engine& engine() { return *engine_; }
  SessionTable& sessions() { return sessions_; }

 private:
  struct Impl;
  std::shared_ptr<Engine> engine_;
  GatewayOptions options_;
  SessionTable sessions_;
  std::unique_ptr<Impl> impl_;
};

/// HTTP status for a domain error.
int http_status(ErrorCode code);

}  // namespace panoptica
