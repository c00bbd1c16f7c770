#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qsteg/codes.hpp"
#include "qsteg/stego.hpp"

namespace qsteg {

// Versioned nested key-value text. A document is the header line
// "qsteg-text 1" followed by one node:
//
//   begin <kind> [<name>]
//     <key> <value...>
//     begin matrix <name>
//       shape <rows> <cols>
//       row <re> <im> <re> <im> ...
//     end
//   end
//
// Numbers use the shortest round-trip decimal form.
inline constexpr int kTextFormatVersion = 1;

struct TextNode {
  std::string kind;
  std::string name;
  std::vector<std::pair<std::string, std::string>> fields;
  std::vector<TextNode> children;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long value);
  void set(const std::string& key, int value) { set(key, static_cast<long>(value)); }
  void set(const std::string& key, const std::vector<double>& values);
  void set(const std::string& key, const std::vector<int>& values);

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_long(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<int> get_ints(const std::string& key) const;

  TextNode& add(const std::string& kind, const std::string& name = "");
  const TextNode& child(const std::string& kind, const std::string& name = "") const;
  std::vector<const TextNode*> children_of(const std::string& kind) const;
};

std::string format_number(double x);

void put_matrix(TextNode& node, const std::string& name, const Matrix& m);
Matrix get_matrix(const TextNode& node, const std::string& name);

std::string write_text(const TextNode& root);
TextNode parse_text(const std::string& text);

TextNode to_text(const CcCode& code);
CcCode cc_code_from_text(const TextNode& node);
TextNode to_text(const QcCode& code);
QcCode qc_code_from_text(const TextNode& node);
TextNode to_text(const StegoCcCode& code);
StegoCcCode stego_cc_from_text(const TextNode& node);
TextNode to_text(const StegoQcCcCode& code);
TextNode to_text(const StegoEsRsCode& code);

}  // namespace qsteg
