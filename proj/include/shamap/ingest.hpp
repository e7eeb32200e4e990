#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "shamap/dataset.hpp"
#include "shamap/error.hpp"
#include "shamap/matrix.hpp"

namespace shamap {

// ---------------------------------------------------------------------------
// IDX (the MNIST container format)
// ---------------------------------------------------------------------------

enum class IdxKind : std::uint8_t {
  U8 = 0x08,
  I8 = 0x09,
  I16 = 0x0B,
  I32 = 0x0C,
  F32 = 0x0D,
  F64 = 0x0E,
};

struct IdxTensor {
  IdxKind kind = IdxKind::U8;
  std::vector<std::size_t> dims;
  std::variant<std::vector<std::uint8_t>, std::vector<std::int8_t>,
               std::vector<std::int16_t>, std::vector<std::int32_t>,
               std::vector<float>, std::vector<double>>
      data;

  std::size_t element_count() const {
    std::size_t n = 1;
    for (std::size_t d : dims) n *= d;
    return n;
  }

  double as_double(std::size_t i) const {
    return std::visit([i](const auto& v) { return static_cast<double>(v[i]); },
                      data);
  }
};

namespace detail {

inline std::size_t idx_element_size(IdxKind k) {
  switch (k) {
    case IdxKind::U8:
    case IdxKind::I8:
      return 1;
    case IdxKind::I16:
      return 2;
    case IdxKind::I32:
    case IdxKind::F32:
      return 4;
    case IdxKind::F64:
      return 8;
  }
  throw FormatError("idx: unknown element kind");
}

template <typename T>
T read_be(const std::uint8_t* p) {
  std::uint64_t acc = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) acc = (acc << 8) | p[b];
  T out;
  if constexpr (sizeof(T) == 1) {
    out = static_cast<T>(static_cast<std::uint8_t>(acc));
  } else if constexpr (std::is_same_v<T, float>) {
    std::uint32_t bits = static_cast<std::uint32_t>(acc);
    std::memcpy(&out, &bits, sizeof(out));
  } else if constexpr (std::is_same_v<T, double>) {
    std::uint64_t bits = acc;
    std::memcpy(&out, &bits, sizeof(out));
  } else {
    out = static_cast<T>(acc);
  }
  return out;
}

template <typename T>
std::vector<T> decode_payload(const std::uint8_t* p, std::size_t count) {
  std::vector<T> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = read_be<T>(p + i * sizeof(T));
  return out;
}

}  // namespace detail

// Big-endian magic 00 00 TT DD, DD big-endian u32 dimension sizes, then the
// row-major payload. Truncation, unknown type codes, and payload length
// mismatches are reported distinctly.
inline IdxTensor parse_idx(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw FormatError("idx: truncated header");
  if (bytes[0] != 0 || bytes[1] != 0)
    throw FormatError("idx: bad magic (leading bytes not zero)");
  const std::uint8_t type_code = bytes[2];
  switch (type_code) {
    case 0x08:
    case 0x09:
    case 0x0B:
    case 0x0C:
    case 0x0D:
    case 0x0E:
      break;
    default: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "idx: unknown type code 0x%02X",
                    type_code);
      throw FormatError(buf);
    }
  }
  const std::size_t ndim = bytes[3];
  if (bytes.size() < 4 + 4 * ndim) throw FormatError("idx: truncated header");

  IdxTensor t;
  t.kind = static_cast<IdxKind>(type_code);
  t.dims.resize(ndim);
  for (std::size_t d = 0; d < ndim; ++d)
    t.dims[d] = detail::read_be<std::uint32_t>(bytes.data() + 4 + 4 * d);

  const std::size_t count = t.element_count();
  const std::size_t esize = detail::idx_element_size(t.kind);
  const std::size_t expect = 4 + 4 * ndim + count * esize;
  if (bytes.size() != expect) {
    std::ostringstream msg;
    msg << "idx: payload length mismatch (expected " << count * esize
        << " payload bytes, got " << bytes.size() - 4 - 4 * ndim << ")";
    throw FormatError(msg.str());
  }
  const std::uint8_t* p = bytes.data() + 4 + 4 * ndim;
  switch (t.kind) {
    case IdxKind::U8:
      t.data = detail::decode_payload<std::uint8_t>(p, count);
      break;
    case IdxKind::I8:
      t.data = detail::decode_payload<std::int8_t>(p, count);
      break;
    case IdxKind::I16:
      t.data = detail::decode_payload<std::int16_t>(p, count);
      break;
    case IdxKind::I32:
      t.data = detail::decode_payload<std::int32_t>(p, count);
      break;
    case IdxKind::F32:
      t.data = detail::decode_payload<float>(p, count);
      break;
    case IdxKind::F64:
      t.data = detail::decode_payload<double>(p, count);
      break;
  }
  return t;
}

inline IdxTensor read_idx_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_idx(bytes);
}

// ---------------------------------------------------------------------------
// PGM (P2 ASCII / P5 binary, maxval <= 255)
// ---------------------------------------------------------------------------

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major
};

namespace detail {

// Reads the next header token, skipping whitespace and '#' comment lines.
inline std::string pgm_token(std::span<const std::uint8_t> bytes,
                             std::size_t& pos) {
  while (pos < bytes.size()) {
    const char c = static_cast<char>(bytes[pos]);
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++pos;
    } else {
      break;
    }
  }
  std::string tok;
  while (pos < bytes.size()) {
    const char c = static_cast<char>(bytes[pos]);
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '#') break;
    tok.push_back(c);
    ++pos;
  }
  return tok;
}

inline std::size_t pgm_uint(std::span<const std::uint8_t> bytes,
                            std::size_t& pos, const char* what) {
  const std::string tok = pgm_token(bytes, pos);
  if (tok.empty()) throw FormatError(std::string("pgm: truncated header (") +
                                     what + " missing)");
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw FormatError(std::string("pgm: non-numeric ") + what + " '" + tok +
                      "'");
  return value;
}

}  // namespace detail

inline GrayImage parse_pgm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  const std::string magic = detail::pgm_token(bytes, pos);
  const bool binary = magic == "P5";
  if (!binary && magic != "P2")
    throw FormatError("pgm: bad magic '" + magic + "' (want P2 or P5)");

  GrayImage img;
  img.width = detail::pgm_uint(bytes, pos, "width");
  img.height = detail::pgm_uint(bytes, pos, "height");
  const std::size_t maxval = detail::pgm_uint(bytes, pos, "maxval");
  if (maxval == 0 || maxval > 255)
    throw FormatError("pgm: maxval " + std::to_string(maxval) +
                      " out of range (1..255)");

  const std::size_t count = img.width * img.height;
  img.pixels.resize(count);
  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    if (pos >= bytes.size()) throw FormatError("pgm: truncated payload");
    ++pos;
    if (bytes.size() - pos < count) throw FormatError("pgm: truncated payload");
    for (std::size_t i = 0; i < count; ++i)
      img.pixels[i] = bytes[pos + i];
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const std::string tok = detail::pgm_token(bytes, pos);
      if (tok.empty()) throw FormatError("pgm: truncated payload");
      std::size_t v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw FormatError("pgm: non-numeric pixel '" + tok + "'");
      if (v > maxval)
        throw FormatError("pgm: pixel value " + std::to_string(v) +
                          " exceeds maxval");
      img.pixels[i] = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

inline GrayImage read_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_pgm(bytes);
}

// ---------------------------------------------------------------------------
// Images -> point cloud
// ---------------------------------------------------------------------------

// Each image flattens row-major to one row; u8 values scale to [0,1].
inline PointCloud images_to_cloud(const std::vector<GrayImage>& images) {
  if (images.empty()) throw std::invalid_argument("images_to_cloud: no images");
  const std::size_t w = images[0].width, h = images[0].height;
  for (const auto& img : images)
    if (img.width != w || img.height != h)
      throw FormatError("images_to_cloud: heterogeneous image shapes");
  Matrix pts(images.size(), w * h);
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t p = 0; p < w * h; ++p)
      pts(i, p) = static_cast<double>(images[i].pixels[p]) / 255.0;
  return PointCloud(std::move(pts));
}

// u8 image tensor [count, height, width] -> cloud rows in [0,1].
inline PointCloud cloud_from_idx_images(const IdxTensor& t) {
  if (t.dims.size() != 3)
    throw FormatError("idx images: expected 3 dimensions [count,h,w], got " +
                      std::to_string(t.dims.size()));
  if (t.kind != IdxKind::U8)
    throw FormatError("idx images: expected u8 elements");
  const auto& raw = std::get<std::vector<std::uint8_t>>(t.data);
  const std::size_t n = t.dims[0], px = t.dims[1] * t.dims[2];
  if (n == 0) throw FormatError("idx images: empty tensor");
  Matrix pts(n, px);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < px; ++p)
      pts(i, p) = static_cast<double>(raw[i * px + p]) / 255.0;
  return PointCloud(std::move(pts));
}

// 1-D integer label tensor -> LabelSet.
inline LabelSet labels_from_idx(const IdxTensor& t) {
  if (t.dims.size() != 1)
    throw FormatError("idx labels: expected 1 dimension, got " +
                      std::to_string(t.dims.size()));
  if (t.kind == IdxKind::F32 || t.kind == IdxKind::F64)
    throw FormatError("idx labels: expected an integer element kind");
  LabelSet labels(t.element_count());
  for (std::size_t i = 0; i < labels.size(); ++i)
    labels[i] = static_cast<int>(t.as_double(i));
  return labels;
}

// First `count` rows whose label equals `wanted`, in original order.
inline PointCloud select_by_label(const PointCloud& cloud,
                                  const LabelSet& labels, int wanted,
                                  std::size_t count) {
  check_labels(labels, cloud);
  if (count == 0)
    throw std::invalid_argument("select_by_label: count must be >= 1");
  std::vector<std::size_t> rows;
  rows.reserve(count);
  for (std::size_t i = 0; i < labels.size() && rows.size() < count; ++i)
    if (labels[i] == wanted) rows.push_back(i);
  if (rows.size() < count)
    throw FormatError("select_by_label: only " + std::to_string(rows.size()) +
                      " samples with label " + std::to_string(wanted) +
                      ", need " + std::to_string(count));
  Matrix pts(count, cloud.dim());
  for (std::size_t r = 0; r < count; ++r)
    for (std::size_t k = 0; k < cloud.dim(); ++k)
      pts(r, k) = cloud.point(rows[r])[k];
  return PointCloud(std::move(pts));
}

// ---------------------------------------------------------------------------
// CSV: header dim0,dim1,...[,label]; 17 significant digits so finite doubles
// round-trip value-exactly.
// ---------------------------------------------------------------------------

struct CsvData {
  Matrix values;
  std::optional<LabelSet> labels;
};

inline void write_csv(std::ostream& out, const Matrix& values,
                      const LabelSet* labels = nullptr) {
  if (labels && labels->size() != values.rows())
    throw std::invalid_argument("write_csv: label count mismatch");
  for (std::size_t k = 0; k < values.cols(); ++k) {
    if (k) out << ',';
    out << "dim" << k;
  }
  if (labels) out << ",label";
  out << '\n';
  char buf[40];
  for (std::size_t i = 0; i < values.rows(); ++i) {
    for (std::size_t k = 0; k < values.cols(); ++k) {
      if (k) out << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", values(i, k));
      out << buf;
    }
    if (labels) out << ',' << (*labels)[i];
    out << '\n';
  }
}

inline CsvData read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  {
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      header.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  const bool has_labels = !header.empty() && header.back() == "label";
  const std::size_t dim = header.size() - (has_labels ? 1 : 0);
  if (dim == 0) throw FormatError("csv: no value columns in header");

  std::vector<double> values;
  LabelSet labels;
  std::size_t rows = 0, lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    {
      std::size_t start = 0;
      const std::string_view sv(line);
      while (true) {
        const std::size_t comma = sv.find(',', start);
        cells.push_back(sv.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    }
    if (cells.size() != header.size())
      throw FormatError("csv: ragged row at line " + std::to_string(lineno) +
                        " (" + std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(header.size()) + ")");
    for (std::size_t k = 0; k < dim; ++k) {
      double v = 0.0;
      const auto cell = cells[k];
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw FormatError("csv: non-numeric cell '" + std::string(cell) +
                          "' at line " + std::to_string(lineno));
      values.push_back(v);
    }
    if (has_labels) {
      int lv = 0;
      const auto cell = cells.back();
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), lv);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw FormatError("csv: non-integer label '" + std::string(cell) +
                          "' at line " + std::to_string(lineno));
      labels.push_back(lv);
    }
    ++rows;
  }
  if (rows == 0) throw FormatError("csv: no data rows");

  Matrix m(rows, dim);
  m.data() = std::move(values);
  CsvData out{std::move(m), std::nullopt};
  if (has_labels) out.labels = std::move(labels);
  return out;
}

inline CsvData read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return read_csv(in);
}

inline void write_csv_file(const std::string& path, const Matrix& values,
                           const LabelSet* labels = nullptr) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  write_csv(out, values, labels);
}

}  // namespace shamap
