#include "wsrec/embedding_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "wsrec/errors.hpp"

namespace wsrec {

namespace {

constexpr char kMagic[] = "WSE";
constexpr int kFormatVersion = 1;

void write_matrix(std::ostream& out, const char* section,
                  const DenseMatrix& matrix, const IdMap& ids) {
  out << section << '\t' << ids.size() << '\n';
  char buffer[64];
  for (std::size_t r = 0; r < ids.size(); ++r) {
    out << ids.id(r);
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      std::snprintf(buffer, sizeof(buffer), "%.17g",
                    matrix(static_cast<Eigen::Index>(r), c));
      out << '\t' << buffer;
    }
    out << '\n';
  }
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find('\t', pos);
    if (next == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return fields;
}

std::string next_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("embedding file ended unexpectedly");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  return line;
}

std::size_t parse_count(std::string_view s, const char* what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError(std::string("embedding file: bad ") + what + " count");
  }
  return value;
}

void read_section(std::istream& in, const char* section, const IdMap& ids,
                  DenseMatrix& out, Eigen::Index dim) {
  const auto header = split_tabs(next_line(in));
  if (header.size() != 2 || header[0] != section) {
    throw DataError(std::string("embedding file: expected ") + section +
                    " section");
  }
  const std::size_t row_count = parse_count(header[1], section);

  out.resize(static_cast<Eigen::Index>(ids.size()), dim);
  std::vector<bool> seen(ids.size(), false);
  std::size_t filled = 0;
  for (std::size_t r = 0; r < row_count; ++r) {
    const std::string line = next_line(in);
    const auto fields = split_tabs(line);
    if (fields.size() != static_cast<std::size_t>(dim) + 1) {
      throw DataError("embedding file: row for id '" +
                      std::string(fields.empty() ? "" : fields[0]) +
                      "' does not have " + std::to_string(dim) + " values");
    }
    const auto index = ids.find(fields[0]);
    if (!index) {
      continue;  // superset file: id outside this matrix's map
    }
    if (seen[*index]) {
      throw DataError("embedding file: duplicate id '" +
                      std::string(fields[0]) + "'");
    }
    seen[*index] = true;
    ++filled;
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto field = fields[static_cast<std::size_t>(c) + 1];
      double value = 0.0;
      auto [ptr, ec] =
          std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc{} || ptr != field.data() + field.size() ||
          !std::isfinite(value)) {
        throw DataError("embedding file: non-finite or malformed value for id '" +
                        std::string(fields[0]) + "'");
      }
      out(static_cast<Eigen::Index>(*index), c) = value;
    }
  }
  if (filled != ids.size()) {
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (!seen[k]) {
        throw DataError("embedding file: missing id '" + ids.id(k) + "'");
      }
    }
  }
}

}  // namespace

void export_embeddings(const EmbeddingPair& e, const IdMap& users,
                       const IdMap& items, std::ostream& out) {
  e.validate(users.size(), items.size());
  out << kMagic << '\t' << kFormatVersion << '\t' << e.dim() << '\n';
  write_matrix(out, "USERS", e.users, users);
  write_matrix(out, "ITEMS", e.items, items);
}

void export_embeddings(const EmbeddingPair& e, const IdMap& users,
                       const IdMap& items, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write embedding file: " + path.string());
  }
  export_embeddings(e, users, items, out);
  if (!out.flush()) {
    throw DataError("failed writing embedding file: " + path.string());
  }
}

EmbeddingPair import_embeddings(std::istream& in, const IdMap& users,
                                const IdMap& items) {
  const auto header = split_tabs(next_line(in));
  if (header.size() != 3 || header[0] != kMagic) {
    throw DataError("not an embedding file (bad header)");
  }
  if (parse_count(header[1], "version") !=
      static_cast<std::size_t>(kFormatVersion)) {
    throw DataError("unsupported embedding file version");
  }
  const std::size_t dim = parse_count(header[2], "dimension");
  if (dim == 0) {
    throw DataError("embedding file: dimension must be positive");
  }

  EmbeddingPair e;
  read_section(in, "USERS", users, e.users, static_cast<Eigen::Index>(dim));
  read_section(in, "ITEMS", items, e.items, static_cast<Eigen::Index>(dim));
  e.source_tag = "imported";
  e.validate(users.size(), items.size());
  return e;
}

EmbeddingPair import_embeddings(const std::filesystem::path& path,
                                const IdMap& users, const IdMap& items) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open embedding file: " + path.string());
  }
  EmbeddingPair e = import_embeddings(in, users, items);
  e.source_tag = "imported from " + path.string();
  return e;
}

}  // namespace wsrec
