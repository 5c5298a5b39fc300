#pragma once

#include <filesystem>
#include <iosfwd>

#include "wsrec/embedding.hpp"
#include "wsrec/id_map.hpp"

namespace wsrec {

// Embedding file format (UTF-8 text, tab-separated):
//   WSE<TAB>1<TAB><dim>
//   USERS<TAB><count>
//   <user_id><TAB>v1<TAB>...<TAB>vd      (one row per user)
//   ITEMS<TAB><count>
//   <item_id><TAB>v1<TAB>...<TAB>vd
// Values are written with 17 significant digits so doubles round-trip
// exactly. Rows are keyed by external id; row order is not significant.

void export_embeddings(const EmbeddingPair& e, const IdMap& users,
                       const IdMap& items, std::ostream& out);
void export_embeddings(const EmbeddingPair& e, const IdMap& users,
                       const IdMap& items, const std::filesystem::path& path);

/// Reads embeddings for exactly the ids in `users` and `items`. Every mapped
/// id must appear exactly once; rows for unknown ids are ignored so a file
/// trained on a superset (e.g. the full dataset) can feed a fold subset.
/// Throws DataError on a missing or duplicate id, a dimension mismatch, or a
/// non-finite value.
EmbeddingPair import_embeddings(std::istream& in, const IdMap& users,
                                const IdMap& items);
EmbeddingPair import_embeddings(const std::filesystem::path& path,
                                const IdMap& users, const IdMap& items);

}  // namespace wsrec
