#pragma once

#include <filesystem>
#include <optional>

#include "rscsaga/dataset.hpp"

namespace rscsaga {

enum class LabelMapping {
  Raw,       // keep the label as read
  PlusMinus  // label > 0 -> +1, otherwise -1
};

// Reads "label idx:val idx:val ..." lines with 1-based indices into a dense
// Dataset. p defaults to the largest index seen; blank lines and '#' comments
// are skipped. Throws IoError or ParseError (with line number); an empty file
// is a ParseError.
Dataset load_libsvm(const std::filesystem::path& path, std::optional<std::size_t> p = std::nullopt,
                    LabelMapping labels = LabelMapping::Raw);

// Writes nonzero entries with 17 significant digits.
void write_libsvm(const Dataset& ds, const std::filesystem::path& path);

// Debug dump: header "row,col,value", one line per nonzero, 0-based indices.
void write_csv_dump(const Dataset& ds, const std::filesystem::path& path);

}  // namespace rscsaga
