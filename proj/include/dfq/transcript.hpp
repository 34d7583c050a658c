#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace dfq {

// Append-only event log of one protocol run. Serialized as JSON lines; every
// record starts with "event" and keeps insertion order of its fields.
class ProtocolTranscript {
 public:
  using Record = nlohmann::ordered_json;

  void append(Record record);

  const std::vector<Record>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  std::string to_jsonl() const;

 private:
  std::vector<Record> records_;
};

}  // namespace dfq
