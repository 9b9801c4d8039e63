#include "linreg/records_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "linreg/errors.hpp"

namespace linreg {
namespace {

using nlohmann::json;

ModelRecord parse_line(const std::string& line, std::size_t line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw InputError("line " + std::to_string(line_no) + ": " + e.what());
  }
  auto fail = [line_no](const std::string& what) -> InputError {
    return InputError("line " + std::to_string(line_no) + ": " + what);
  };
  if (!obj.is_object()) throw fail("expected a JSON object");
  if (!obj.contains("id") || !obj["id"].is_string()) throw fail("missing string field \"id\"");
  if (!obj.contains("v") || !obj["v"].is_number()) throw fail("missing numeric field \"v\"");
  if (!obj.contains("l") || !obj["l"].is_number()) throw fail("missing numeric field \"l\"");
  if (!obj.contains("q") || !obj["q"].is_array()) throw fail("missing array field \"q\"");

  ModelRecord rec;
  rec.id = obj["id"].get<std::string>();
  rec.v = obj["v"].get<double>();
  rec.l_hat = obj["l"].get<double>();
  for (const json& x : obj["q"]) {
    if (!x.is_number()) throw fail("\"q\" must contain only numbers");
    rec.q.push_back(x.get<double>());
  }
  if (obj.contains("test_loss") && !obj["test_loss"].is_null()) {
    if (!obj["test_loss"].is_number()) throw fail("\"test_loss\" must be a number");
    rec.test_loss = obj["test_loss"].get<double>();
  }
  return rec;
}

}  // namespace

std::vector<ModelRecord> read_records_jsonl(std::istream& in) {
  std::vector<ModelRecord> records;
  std::string line;
  std::size_t line_no = 0;
  std::size_t k = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ModelRecord rec = parse_line(line, line_no);
    if (records.empty()) {
      k = rec.q.size();
    } else if (rec.q.size() != k) {
      throw InputError("line " + std::to_string(line_no) + ": feature length " +
                       std::to_string(rec.q.size()) + " does not match first line's " +
                       std::to_string(k));
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw InputError("no records found");
  return records;
}

std::vector<ModelRecord> read_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open records file: " + path);
  return read_records_jsonl(in);
}

void write_records_jsonl(const std::vector<ModelRecord>& records, std::ostream& out) {
  for (const ModelRecord& rec : records) {
    json obj;
    obj["id"] = rec.id;
    obj["v"] = rec.v;
    obj["l"] = rec.l_hat;
    obj["q"] = rec.q;
    if (rec.test_loss) obj["test_loss"] = *rec.test_loss;
    out << obj.dump() << '\n';
  }
}

}  // namespace linreg
