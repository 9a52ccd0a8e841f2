#pragma once

// CSV and JSON serialization of sampled fields.

#include <iosfwd>
#include <string>

#include "hirota/inverse.hpp"
#include "json.hpp"

namespace hirota {

inline constexpr const char* kCsvHeader = "x,t,re_q1,im_q1,re_q0,im_q0,re_qm1,im_qm1";
inline constexpr const char* kSchemaVersion = "1";

// Rows are t outer, x inner, 17 significant digits. Masked points are written as nan.
void write_csv(std::ostream& os, const FieldGrid& grid);
std::string to_csv(const FieldGrid& grid);

// Throws BadConfig on malformed input.
FieldGrid read_csv(std::istream& is);

nlohmann::json field_to_json(const FieldGrid& grid);
FieldGrid field_from_json(const nlohmann::json& doc);

}  // namespace hirota
