#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>

namespace advisor::engine {

class PublishingBuf;

/// Backing storage for routers opened with `(open "path" name "mode")`.
/// Returns null when the path cannot be opened.
class FileStore {
 public:
  virtual ~FileStore() = default;
  virtual std::unique_ptr<std::istream> open_read(const std::string& path) = 0;
  virtual std::unique_ptr<std::ostream> open_write(const std::string& path, bool append) = 0;
};

/// Real files, relative paths resolved against `base`. Streams are binary so
/// CR LF reaches disk unchanged.
class DiskFileStore final : public FileStore {
 public:
  explicit DiskFileStore(std::filesystem::path base = std::filesystem::current_path());

  std::unique_ptr<std::istream> open_read(const std::string& path) override;
  std::unique_ptr<std::ostream> open_write(const std::string& path, bool append) override;

  const std::filesystem::path& base() const noexcept { return base_; }

 private:
  std::filesystem::path resolve(const std::string& path) const;

  std::filesystem::path base_;
};

/// In-memory files keyed by path. A written file becomes visible through
/// contents() as soon as the writing stream is flushed or destroyed.
class MemoryFileStore final : public FileStore {
 public:
  MemoryFileStore() = default;

  void put(const std::string& path, std::string contents);
  std::optional<std::string> contents(const std::string& path) const;

  std::unique_ptr<std::istream> open_read(const std::string& path) override;
  std::unique_ptr<std::ostream> open_write(const std::string& path, bool append) override;

 private:
  friend class PublishingBuf;
  void commit(const std::string& path, const std::string& contents);

  mutable std::mutex mutex_;
  std::map<std::string, std::string> files_;
};

}  // namespace advisor::engine
