#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "linreg/records.hpp"

namespace linreg {

// JSONL record format, one object per line:
//   {"id": str, "v": num, "l": num, "q": [num, ...], "test_loss": num}
// test_loss may be absent or null. The feature length is inferred from the
// first line; every later line must agree. Errors name the offending line.
std::vector<ModelRecord> read_records_jsonl(std::istream& in);
std::vector<ModelRecord> read_records_file(const std::string& path);

void write_records_jsonl(const std::vector<ModelRecord>& records, std::ostream& out);

}  // namespace linreg
