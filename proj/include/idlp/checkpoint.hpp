#pragma once

#include <filesystem>
#include <iosfwd>

#include "idlp/model.hpp"

namespace idlp {

// Text checkpoint:
//   d m n_slots
//   n_slots lines of d values
//   m blocks of d lines of d values (row-major)
//   one `domain id slot` line per entity, domain 1 first
// Values use 17 significant digits so reading back is exact.
void write_checkpoint(const EmbeddingModel& model, std::ostream& out);
EmbeddingModel read_checkpoint(std::istream& in, const std::string& source_name = "<stream>");

void save_checkpoint(const EmbeddingModel& model, const std::filesystem::path& path);
EmbeddingModel load_checkpoint(const std::filesystem::path& path);

}  // namespace idlp
