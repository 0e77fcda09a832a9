#include "advisor/engine/io.hpp"

#include <fstream>
#include <sstream>

namespace advisor::engine {

// Publishes the whole buffer to the store on every flush and on close.
class PublishingBuf final : public std::stringbuf {
 public:
  PublishingBuf(MemoryFileStore& store, std::string path, std::string initial)
      : std::stringbuf(std::move(initial), std::ios_base::out | std::ios_base::ate),
        store_(store),
        path_(std::move(path)) {
    store_.commit(path_, str());
  }
  ~PublishingBuf() override { store_.commit(path_, str()); }

 protected:
  int sync() override {
    store_.commit(path_, str());
    return 0;
  }

 private:
  MemoryFileStore& store_;
  std::string path_;
};

namespace {

struct BufHolder {
  PublishingBuf buf;
};

class MemoryWriter final : private BufHolder, public std::ostream {
 public:
  MemoryWriter(MemoryFileStore& store, std::string path, std::string initial)
      : BufHolder{PublishingBuf(store, std::move(path), std::move(initial))}, std::ostream(&buf) {}
};

}  // namespace

DiskFileStore::DiskFileStore(std::filesystem::path base) : base_(std::move(base)) {}

std::filesystem::path DiskFileStore::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : base_ / p;
}

std::unique_ptr<std::istream> DiskFileStore::open_read(const std::string& path) {
  auto in = std::make_unique<std::ifstream>(resolve(path), std::ios::binary);
  if (!*in) return nullptr;
  return in;
}

std::unique_ptr<std::ostream> DiskFileStore::open_write(const std::string& path, bool append) {
  const auto mode = std::ios::binary | (append ? std::ios::app : std::ios::trunc);
  auto out = std::make_unique<std::ofstream>(resolve(path), mode);
  if (!*out) return nullptr;
  return out;
}

void MemoryFileStore::put(const std::string& path, std::string contents) {
  commit(path, contents);
}

std::optional<std::string> MemoryFileStore::contents(const std::string& path) const {
  std::lock_guard lock(mutex_);
  const auto it = files_.find(path);
  if (it == files_.end()) return std::nullopt;
  return it->second;
}

void MemoryFileStore::commit(const std::string& path, const std::string& contents) {
  std::lock_guard lock(mutex_);
  files_[path] = contents;
}

std::unique_ptr<std::istream> MemoryFileStore::open_read(const std::string& path) {
  auto text = contents(path);
  if (!text) return nullptr;
  return std::make_unique<std::istringstream>(std::move(*text), std::ios::binary);
}

std::unique_ptr<std::ostream> MemoryFileStore::open_write(const std::string& path, bool append) {
  std::string initial;
  if (append) initial = contents(path).value_or("");
  return std::make_unique<MemoryWriter>(*this, path, std::move(initial));
}

}  // namespace advisor::engine
