#include "dfq/transcript.hpp"

#include <stdexcept>

namespace dfq {

void ProtocolTranscript::append(Record record) {
  if (!record.is_object() || !record.contains("event")) {
    throw std::invalid_argument("transcript record needs an \"event\" field");
  }
  records_.push_back(std::move(record));
}

std::string ProtocolTranscript::to_jsonl() const {
  std::string out;
  for (const auto& r : records_) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

}  // namespace dfq
