#pragma once

#include <filesystem>

#include "idlp/domain_pair.hpp"

namespace idlp {

inline constexpr int kPairSchemaVersion = 1;

// Writes the pair as a directory of text files:
//   entities1.txt entities2.txt predicates.txt   one name per line, line = id
//   common.tsv                                   id1<TAB>id2
//   train1.tsv train2.tsv                        head<TAB>pred<TAB>tail
//   intra_test.tsv                               head pred tail domain
//   inter_valid.tsv inter_test.tsv               head pred tail head_domain
//   meta.txt                                     key=value
// Output is a deterministic function of the pair.
void save_domain_pair(const DomainPair& pair, const std::filesystem::path& dir);

// Throws DataError naming the offending file on any missing or malformed
// file, or on a schema version mismatch.
DomainPair load_domain_pair(const std::filesystem::path& dir);

}  // namespace idlp
