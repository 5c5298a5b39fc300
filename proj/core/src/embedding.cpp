#include "wsrec/embedding.hpp"

#include "wsrec/errors.hpp"

namespace wsrec {

void EmbeddingPair::validate(std::size_t user_count,
                             std::size_t item_count) const {
  if (users.cols() != items.cols()) {
    throw DataError("user and item embeddings disagree on dimension");
  }
  if (static_cast<std::size_t>(users.rows()) != user_count ||
      static_cast<std::size_t>(items.rows()) != item_count) {
    throw DataError("embedding row counts do not match the interaction matrix");
  }
  if (!is_finite()) {
    throw DataError("embedding contains non-finite values");
  }
}

}  // namespace wsrec
