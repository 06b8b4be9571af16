#pragma once

#include <iosfwd>
#include <string>

#include "clab/field.hpp"

namespace clab {

// "CLF1 dim N L rank components\n" then (re, im) little-endian float64 pairs,
// component by component, row-major FFT order.
void write_clf1(std::ostream& os, const Field& f);
Field read_clf1(std::istream& is);

// Atomic: writes path + ".tmp" then renames.
void save_clf1(const std::string& path, const Field& f);
Field load_clf1(const std::string& path);

// write-temp-then-rename for any text payload
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace clab
