#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

#include "pkv/index.hpp"

namespace pkv {
namespace {

constexpr char kMagic[4] = {'P', 'K', 'V', 'X'};

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void varint(std::uint64_t v) {
    while (v >= 0x80) {
      out_.push_back(static_cast<std::uint8_t>(v | 0x80));
      v >>= 7;
    }
    out_.push_back(static_cast<std::uint8_t>(v));
  }
  void str(const std::string& s) {
    if (s.size() > std::numeric_limits<std::uint32_t>::max()) throw Error(ErrorCode::IoFailure, "string too long");
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }

  std::vector<std::uint8_t>& buffer() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_++]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_++]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      const std::uint8_t b = u8();
      v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
      if ((b & 0x80) == 0) return v;
    }
    throw Error(ErrorCode::ChecksumMismatch, "varint overflow");
  }
  std::uint32_t varint32() {
    const auto v = varint();
    if (v > std::numeric_limits<std::uint32_t>::max()) throw Error(ErrorCode::ChecksumMismatch, "value out of range");
    return static_cast<std::uint32_t>(v);
  }
  std::string str() {
    const std::uint32_t len = u32();
    need(len);
    std::string s(reinterpret_cast<const char*>(data_.data() + pos_), len);
    pos_ += len;
    return s;
  }
  /// Element count bounded by the bytes left, so corrupt counts cannot
  /// trigger huge allocations.
  std::uint64_t count(std::size_t min_bytes_each) {
    const auto n = u64();
    if (min_bytes_each > 0 && n > remaining() / min_bytes_each) {
      throw Error(ErrorCode::ChecksumMismatch, "implausible element count");
    }
    return n;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw Error(ErrorCode::IoFailure, "unexpected end of index data");
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

template <class Pairs>
void write_delta_pairs(Writer& w, const Pairs& pairs) {
  w.varint(pairs.size());
  std::uint64_t prev = 0;
  for (const auto& [key, count] : pairs) {
    w.varint(static_cast<std::uint64_t>(key) - prev);
    w.varint(count);
    prev = static_cast<std::uint64_t>(key);
  }
}

void check(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::ChecksumMismatch, what);
}

}  // namespace

std::vector<std::uint8_t> encode_index(const SimilarityIndex& index) {
  Writer w;
  const std::size_t n = index.phrases_.size();
  const std::size_t dims = index.dimensions_.size();

  w.bytes(kMagic, 4);
  w.u32(SimilarityIndex::kFormatVersion);
  w.u8(static_cast<std::uint8_t>(index.level_));
  w.u64(n);
  w.u64(dims);

  w.u64(n + dims);
  for (const auto& s : index.phrases_) w.str(s);
  for (const auto& s : index.dimensions_) w.str(s);

  for (std::uint32_t id = 0; id < n; ++id) {
    w.u32(index.doc_freq_[id]);
    w.f64(index.norms_[id]);
    const auto d = index.vector_dims(id);
    const auto c = index.vector_counts(id);
    w.varint(d.size());
    std::uint32_t prev = 0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      w.varint(d[k] - prev);
      w.varint(c[k]);
      prev = d[k];
    }
    const auto tl = index.timeline(id);
    w.varint(tl.size());
    for (const auto& [year, count] : tl) {
      w.varint(static_cast<std::uint32_t>(year));
      w.varint(count);
    }
    write_delta_pairs(w, index.applicants(id));
    write_delta_pairs(w, index.inventors(id));
  }

  for (std::uint32_t dim = 0; dim < dims; ++dim) {
    const auto ids = index.posting_ids(dim);
    const auto counts = index.posting_counts(dim);
    w.varint(ids.size());
    std::uint32_t prev = 0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      w.varint(ids[k] - prev);
      w.varint(counts[k]);
      prev = ids[k];
    }
  }

  w.u64(index.applicant_names_.size());
  for (const auto& s : index.applicant_names_) w.str(s);
  w.u64(index.inventor_names_.size());
  for (const auto& s : index.inventor_names_) w.str(s);
  w.u64(index.aliases_.size());
  for (const auto& [variant, id] : index.aliases_) {
    w.str(variant);
    w.u32(id);
  }

  auto& buf = w.buffer();
  const auto crc = crc32_z(0L, buf.data(), buf.size());
  w.u32(static_cast<std::uint32_t>(crc));
  return std::move(buf);
}

SimilarityIndex decode_index(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw Error(ErrorCode::IoFailure, "index data truncated");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw Error(ErrorCode::BadMagic, "not a PKVX index");
  if (bytes.size() < 8 + 4) throw Error(ErrorCode::IoFailure, "index data truncated");
  Reader header(bytes.subspan(4));
  const auto version = header.u32();
  if (version != SimilarityIndex::kFormatVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "found " + std::to_string(version) + ", expected " + std::to_string(SimilarityIndex::kFormatVersion));
  }
  const auto body = bytes.first(bytes.size() - 4);
  Reader trailer(bytes.last(4));
  const auto stored_crc = trailer.u32();
  const auto crc = static_cast<std::uint32_t>(crc32_z(0L, body.data(), body.size()));
  if (crc != stored_crc) throw Error(ErrorCode::ChecksumMismatch, "CRC32 mismatch");

  Reader r(body.subspan(8));
  SimilarityIndex index;
  const auto level = r.u8();
  check(level <= static_cast<std::uint8_t>(GranularityLevel::Subgroup), "bad granularity tag");
  index.level_ = static_cast<GranularityLevel>(level);
  const auto n = r.u64();
  const auto dims = r.u64();
  const auto strings = r.count(4);
  check(strings == n + dims, "string table size");
  index.phrases_.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) index.phrases_.push_back(r.str());
  index.dimensions_.reserve(dims);
  for (std::uint64_t i = 0; i < dims; ++i) index.dimensions_.push_back(r.str());
  check(n <= std::numeric_limits<std::uint32_t>::max(), "too many phrases");

  index.norms_.reserve(n);
  index.doc_freq_.reserve(n);
  for (std::uint64_t id = 0; id < n; ++id) {
    index.doc_freq_.push_back(r.u32());
    index.norms_.push_back(r.f64());
    const auto nnz = r.varint();
    check(nnz <= r.remaining(), "vector length");
    std::uint64_t dim = 0;
    for (std::uint64_t k = 0; k < nnz; ++k) {
      const auto delta = r.varint();
      check(k == 0 || delta > 0, "vector dims not ascending");
      dim += delta;
      check(dim < dims, "vector dim out of range");
      index.vec_dims_.push_back(static_cast<std::uint32_t>(dim));
      index.vec_counts_.push_back(r.varint32());
    }
    index.vec_offsets_.push_back(index.vec_dims_.size());

    const auto tl = r.varint();
    check(tl <= r.remaining(), "timeline length");
    for (std::uint64_t k = 0; k < tl; ++k) {
      const auto year = static_cast<std::int32_t>(r.varint32());
      index.timelines_.emplace_back(year, r.varint32());
    }
    index.timeline_offsets_.push_back(index.timelines_.size());

    auto read_pairs = [&](std::vector<EntityCount>& out, std::vector<std::uint64_t>& offsets) {
      const auto len = r.varint();
      check(len <= r.remaining(), "entity list length");
      std::uint64_t key = 0;
      for (std::uint64_t k = 0; k < len; ++k) {
        key += r.varint();
        out.emplace_back(static_cast<std::uint32_t>(key), r.varint32());
      }
      offsets.push_back(out.size());
    };
    read_pairs(index.applicant_counts_, index.applicant_offsets_);
    read_pairs(index.inventor_counts_, index.inventor_offsets_);
  }

  index.post_offsets_.reserve(dims + 1);
  for (std::uint64_t d = 0; d < dims; ++d) {
    const auto len = r.varint();
    check(len <= r.remaining(), "posting list length");
    std::uint64_t id = 0;
    for (std::uint64_t k = 0; k < len; ++k) {
      const auto delta = r.varint();
      check(k == 0 || delta > 0, "posting ids not ascending");
      id += delta;
      check(id < n, "posting id out of range");
      index.post_ids_.push_back(static_cast<std::uint32_t>(id));
      index.post_counts_.push_back(r.varint32());
    }
    index.post_offsets_.push_back(index.post_ids_.size());
  }
  check(index.post_ids_.size() == index.vec_dims_.size(), "posting lists do not cover vectors");

  const auto apps = r.count(4);
  for (std::uint64_t i = 0; i < apps; ++i) index.applicant_names_.push_back(r.str());
  const auto invs = r.count(4);
  for (std::uint64_t i = 0; i < invs; ++i) index.inventor_names_.push_back(r.str());
  for (const auto& [id, _] : index.applicant_counts_) check(id < apps, "applicant id out of range");
  for (const auto& [id, _] : index.inventor_counts_) check(id < invs, "inventor id out of range");
  const auto aliases = r.count(8);
  for (std::uint64_t i = 0; i < aliases; ++i) {
    auto variant = r.str();
    const auto id = r.u32();
    check(id < n, "alias target out of range");
    index.aliases_.emplace(std::move(variant), id);
  }
  check(r.remaining() == 0, "trailing bytes before checksum");
  return index;
}

void save_index(const SimilarityIndex& index, const std::filesystem::path& path) {
  const auto bytes = encode_index(index);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

SimilarityIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  const auto size = in.tellg();
  if (size < 0) throw Error(ErrorCode::IoFailure, "cannot size " + path.string());
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  in.seekg(0);
  in.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!in) throw Error(ErrorCode::IoFailure, "read failed for " + path.string());
  return decode_index(bytes);
}

}  // namespace pkv
