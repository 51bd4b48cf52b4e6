#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "dukego/solver.hpp"

namespace dukego::solver {

namespace {

constexpr char kMagic[7] = {'D', 'U', 'K', 'E', 'G', 'O', '\0'};

class Fnv1a {
 public:
  void update(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ull;
    }
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ull;
};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void bytes(const void* data, std::size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    sum_.update(data, n);
  }
  template <typename T>
  void le(T v) {
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFF);
    bytes(buf, sizeof(T));
  }
  std::uint64_t checksum() const { return sum_.value(); }

 private:
  std::ostream& out_;
  Fnv1a sum_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}
  void bytes(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw CacheError("cache file truncated (checksum cannot match)");
    sum_.update(data, n);
  }
  template <typename T>
  T le() {
    unsigned char buf[sizeof(T)];
    bytes(buf, sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return static_cast<T>(v);
  }
  std::uint64_t checksum() const { return sum_.value(); }

 private:
  std::istream& in_;
  Fnv1a sum_;
};

}  // namespace

void write_cache(const SolveResult& res, std::ostream& out) {
  const StateIndexer& ix = res.indexer();
  Writer w(out);
  w.bytes(kMagic, sizeof kMagic);
  w.le<std::uint16_t>(kCacheVersion);
  w.le<std::uint16_t>(static_cast<std::uint16_t>(ix.dims().rows));
  w.le<std::uint16_t>(static_cast<std::uint16_t>(ix.dims().cols));
  w.le<std::uint16_t>(static_cast<std::uint16_t>(ix.white_budget()));
  w.le<std::uint16_t>(static_cast<std::uint16_t>(ix.black_budget()));
  w.le<std::uint64_t>(ix.total_states());
  w.bytes(res.packed_labels().data(), res.packed_labels().size());
  w.le<std::uint8_t>(res.has_distance() ? 1 : 0);
  if (res.has_distance()) {
    std::vector<unsigned char> buf(res.distances().size() * 2);
    for (std::size_t i = 0; i < res.distances().size(); ++i) {
      buf[2 * i] = static_cast<unsigned char>(res.distances()[i] & 0xFF);
      buf[2 * i + 1] = static_cast<unsigned char>(res.distances()[i] >> 8);
    }
    w.bytes(buf.data(), buf.size());
  }
  std::uint64_t sum = w.checksum();
  unsigned char tail[8];
  for (int i = 0; i < 8; ++i) tail[i] = static_cast<unsigned char>((sum >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(tail), 8);
  if (!out) throw CacheError("failed writing cache");
}

SolveResult read_cache(std::istream& in) {
  Reader r(in);
  char magic[sizeof kMagic];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw CacheError("not a Dukego cache file (bad magic)");
  auto version = r.le<std::uint16_t>();
  if (version != kCacheVersion)
    throw CacheError("unsupported cache version " + std::to_string(version) + " (reader expects " +
                     std::to_string(kCacheVersion) + ")");
  Dims dims{r.le<std::uint16_t>(), 0};
  dims.cols = r.le<std::uint16_t>();
  int whites = r.le<std::uint16_t>();
  int blacks = r.le<std::uint16_t>();
  auto states = r.le<std::uint64_t>();
  if (!dims.valid() || dims.area() > kMaxArea || whites + blacks > kMaxStones)
    throw CacheError("cache header describes an unsupported space");
  StateIndexer ix(dims, whites, blacks);
  if (states != ix.total_states()) throw CacheError("cache state count does not match its header");
  std::vector<std::uint8_t> packed((states + 3) / 4);
  r.bytes(packed.data(), packed.size());
  auto has_distance = r.le<std::uint8_t>();
  std::vector<std::uint16_t> distance;
  if (has_distance) {
    std::vector<unsigned char> buf(states * 2);
    r.bytes(buf.data(), buf.size());
    distance.resize(states);
    for (std::uint64_t i = 0; i < states; ++i)
      distance[i] = static_cast<std::uint16_t>(buf[2 * i] | (buf[2 * i + 1] << 8));
  }
  std::uint64_t expected = r.checksum();
  unsigned char tail[8];
  in.read(reinterpret_cast<char*>(tail), 8);
  if (in.gcount() != 8) throw CacheError("cache file truncated (checksum missing)");
  std::uint64_t stored = 0;
  for (int i = 0; i < 8; ++i) stored |= static_cast<std::uint64_t>(tail[i]) << (8 * i);
  if (stored != expected) throw CacheError("cache checksum mismatch");
  return SolveResult(std::move(ix), std::move(packed), std::move(distance));
}

void save_cache(const SolveResult& res, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CacheError("cannot open " + path + " for writing");
  write_cache(res, out);
}

SolveResult load_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("cannot open " + path);
  return read_cache(in);
}

}  // namespace dukego::solver
