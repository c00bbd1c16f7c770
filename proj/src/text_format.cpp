#include "qsteg/text_format.hpp"

#include <charconv>
#include <sstream>

#include "qsteg/error.hpp"

namespace qsteg {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::kConfig, what); }

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail("not a number: '" + s + "'");
  return v;
}

long parse_integer(const std::string& s) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail("not an integer: '" + s + "'");
  return v;
}

void write_node(const TextNode& node, int depth, std::string& out) {
  const std::string pad(2 * depth, ' ');
  out += pad + "begin " + node.kind;
  if (!node.name.empty()) out += " " + node.name;
  out += "\n";
  for (const auto& [k, v] : node.fields) out += pad + "  " + k + " " + v + "\n";
  for (const auto& c : node.children) write_node(c, depth + 1, out);
  out += pad + "end\n";
}

void put_state(TextNode& node, const std::string& name, const DensityMatrix& rho) {
  put_matrix(node, name, rho.matrix());
}

void put_povm(TextNode& node, const std::string& name, const Povm& p) {
  TextNode& n = node.add("povm", name);
  n.set("size", static_cast<long>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) put_matrix(n, std::to_string(i), p[i]);
}

Povm get_povm(const TextNode& node, const std::string& name) {
  const TextNode& n = node.child("povm", name);
  std::vector<Matrix> elems;
  for (long i = 0; i < n.get_long("size"); ++i) elems.push_back(get_matrix(n, std::to_string(i)));
  return Povm(std::move(elems), 1e-8);
}

void put_channel(TextNode& node, const std::string& name, const QuantumChannel& ch) {
  TextNode& n = node.add("channel", name);
  n.set("kraus", static_cast<long>(ch.num_kraus()));
  for (std::size_t i = 0; i < ch.num_kraus(); ++i) {
    put_matrix(n, std::to_string(i), ch.kraus()[i]);
  }
}

QuantumChannel get_channel(const TextNode& node, const std::string& name) {
  const TextNode& n = node.child("channel", name);
  std::vector<Matrix> kraus;
  for (long i = 0; i < n.get_long("kraus"); ++i) kraus.push_back(get_matrix(n, std::to_string(i)));
  return QuantumChannel(std::move(kraus), 1e-8);
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void TextNode::set(const std::string& key, const std::string& value) {
  if (key.empty() || key.find_first_of(" \t\n") != std::string::npos ||
      value.find('\n') != std::string::npos) {
    fail("keys must be single words and values single lines");
  }
  for (auto& [k, v] : fields) {
    if (k == key) {
      v = value;
      return;
    }
  }
  fields.emplace_back(key, value);
}

void TextNode::set(const std::string& key, double value) { set(key, format_number(value)); }

void TextNode::set(const std::string& key, long value) { set(key, std::to_string(value)); }

void TextNode::set(const std::string& key, const std::vector<double>& values) {
  std::string s = std::to_string(values.size());
  for (double v : values) s += " " + format_number(v);
  set(key, s);
}

void TextNode::set(const std::string& key, const std::vector<int>& values) {
  std::string s = std::to_string(values.size());
  for (int v : values) s += " " + std::to_string(v);
  set(key, s);
}

bool TextNode::has(const std::string& key) const {
  for (const auto& f : fields) {
    if (f.first == key) return true;
  }
  return false;
}

const std::string& TextNode::get(const std::string& key) const {
  for (const auto& f : fields) {
    if (f.first == key) return f.second;
  }
  fail("missing key '" + key + "' in " + kind);
}

double TextNode::get_double(const std::string& key) const { return parse_number(get(key)); }

long TextNode::get_long(const std::string& key) const { return parse_integer(get(key)); }

std::vector<double> TextNode::get_doubles(const std::string& key) const {
  const auto words = split_words(get(key));
  if (words.empty() || parse_integer(words[0]) + 1 != static_cast<long>(words.size())) {
    fail("bad list length for '" + key + "'");
  }
  std::vector<double> out;
  for (std::size_t i = 1; i < words.size(); ++i) out.push_back(parse_number(words[i]));
  return out;
}

std::vector<int> TextNode::get_ints(const std::string& key) const {
  std::vector<int> out;
  for (double v : get_doubles(key)) out.push_back(static_cast<int>(v));
  return out;
}

TextNode& TextNode::add(const std::string& k, const std::string& n) {
  children.push_back(TextNode{k, n, {}, {}});
  return children.back();
}

const TextNode& TextNode::child(const std::string& k, const std::string& n) const {
  for (const auto& c : children) {
    if (c.kind == k && c.name == n) return c;
  }
  fail("missing node '" + k + " " + n + "' in " + kind);
}

std::vector<const TextNode*> TextNode::children_of(const std::string& k) const {
  std::vector<const TextNode*> out;
  for (const auto& c : children) {
    if (c.kind == k) out.push_back(&c);
  }
  return out;
}

void put_matrix(TextNode& node, const std::string& name, const Matrix& m) {
  TextNode& n = node.add("matrix", name);
  n.set("shape", std::to_string(m.rows()) + " " + std::to_string(m.cols()));
  for (long i = 0; i < m.rows(); ++i) {
    std::string row;
    for (long j = 0; j < m.cols(); ++j) {
      if (j) row += ' ';
      row += format_number(m(i, j).real()) + " " + format_number(m(i, j).imag());
    }
    n.fields.emplace_back("row", row);
  }
}

Matrix get_matrix(const TextNode& node, const std::string& name) {
  const TextNode& n = node.child("matrix", name);
  const auto shape = split_words(n.get("shape"));
  if (shape.size() != 2) fail("bad matrix shape");
  const long rows = parse_integer(shape[0]);
  const long cols = parse_integer(shape[1]);
  Matrix m(rows, cols);
  long i = 0;
  for (const auto& [k, v] : n.fields) {
    if (k != "row") continue;
    const auto words = split_words(v);
    if (i >= rows || static_cast<long>(words.size()) != 2 * cols) fail("bad matrix row");
    for (long j = 0; j < cols; ++j) {
      m(i, j) = Complex(parse_number(words[2 * j]), parse_number(words[2 * j + 1]));
    }
    ++i;
  }
  if (i != rows) fail("matrix '" + name + "' has missing rows");
  return m;
}

std::string write_text(const TextNode& root) {
  std::string out = "qsteg-text " + std::to_string(kTextFormatVersion) + "\n";
  write_node(root, 0, out);
  return out;
}

TextNode parse_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  auto where = [&lineno]() { return "line " + std::to_string(lineno) + ": "; };
  if (!std::getline(in, line)) fail("empty document");
  ++lineno;
  const auto head = split_words(line);
  if (head.size() != 2 || head[0] != "qsteg-text") fail(where() + "missing header");
  if (parse_integer(head[1]) != kTextFormatVersion) fail(where() + "unsupported version");

  TextNode root;
  bool have_root = false;
  std::vector<TextNode*> stack;
  while (std::getline(in, line)) {
    ++lineno;
    const auto start = line.find_first_not_of(' ');
    if (start == std::string::npos) continue;
    const std::string body = line.substr(start);
    const auto space = body.find(' ');
    const std::string key = body.substr(0, space);
    const std::string rest = space == std::string::npos ? "" : body.substr(space + 1);
    if (key == "begin") {
      const auto words = split_words(rest);
      if (words.empty() || words.size() > 2) fail(where() + "bad begin line");
      const std::string name = words.size() == 2 ? words[1] : "";
      if (stack.empty()) {
        if (have_root) fail(where() + "more than one top-level node");
        root = TextNode{words[0], name, {}, {}};
        have_root = true;
        stack.push_back(&root);
      } else {
        stack.push_back(&stack.back()->add(words[0], name));
      }
    } else if (key == "end") {
      if (stack.empty()) fail(where() + "unmatched end");
      stack.pop_back();
    } else {
      if (stack.empty()) fail(where() + "field outside a node");
      stack.back()->fields.emplace_back(key, rest);
    }
  }
  if (!have_root || !stack.empty()) fail(where() + "unterminated document");
  return root;
}

TextNode to_text(const CcCode& code) {
  TextNode n{"cc_code", "", {}, {}};
  n.set("messages", code.messages());
  n.set("uses", code.uses);
  n.set("reliability", code.reliability);
  for (int w = 0; w < code.messages(); ++w) put_state(n, "f" + std::to_string(w), code.codewords[w]);
  put_povm(n, "decoder", code.decoder);
  return n;
}

CcCode cc_code_from_text(const TextNode& n) {
  if (n.kind != "cc_code") fail("expected cc_code, found " + n.kind);
  CcCode code;
  for (long w = 0; w < n.get_long("messages"); ++w) {
    code.codewords.emplace_back(get_matrix(n, "f" + std::to_string(w)), 1e-9);
  }
  code.decoder = get_povm(n, "decoder");
  code.uses = static_cast<int>(n.get_long("uses"));
  code.reliability = n.get_double("reliability");
  return code;
}

TextNode to_text(const QcCode& code) {
  TextNode n{"qc_code", "", {}, {}};
  n.set("messages", code.messages);
  std::vector<int> idx(code.correctable.begin(), code.correctable.end());
  n.set("correctable", idx);
  n.set("recovery_constant", code.recovery_constant);
  n.set("recovery_residual", code.recovery_residual);
  put_matrix(n, "encoder", code.encoder.matrix());
  put_channel(n, "decoder", code.decoder);
  return n;
}

QcCode qc_code_from_text(const TextNode& n) {
  if (n.kind != "qc_code") fail("expected qc_code, found " + n.kind);
  QcCode code;
  code.messages = static_cast<int>(n.get_long("messages"));
  for (int j : n.get_ints("correctable")) code.correctable.push_back(static_cast<std::size_t>(j));
  code.recovery_constant = n.get_double("recovery_constant");
  code.recovery_residual = n.get_double("recovery_residual");
  code.encoder = Isometry(get_matrix(n, "encoder"));
  code.decoder = get_channel(n, "decoder");
  return code;
}

TextNode to_text(const StegoCcCode& code) {
  TextNode n{"stego_cc", "", {}, {}};
  n.set("cover_messages", code.cover_messages);
  n.set("cypher_messages", code.cypher_messages);
  n.set("keys", code.keys);
  n.set("resolvability", static_cast<long>(code.resolvability));
  n.set("warning", static_cast<long>(code.warning));
  for (int w = 0; w < code.cover_messages; ++w) {
    const KeyedSubcode& sub = code.per_message[w];
    TextNode& s = n.add("subcode", std::to_string(w));
    s.set("defect", sub.defect);
    s.set("error", sub.error);
    for (int k = 0; k < sub.keys; ++k) {
      for (int wb = 0; wb < sub.messages; ++wb) {
        put_state(s, "input_" + std::to_string(k) + "_" + std::to_string(wb), sub.inputs[k][wb]);
      }
      put_povm(s, "decoder_" + std::to_string(k), sub.decoders[k]);
    }
  }
  for (int k = 0; k < code.keys; ++k) put_povm(n, "joint_" + std::to_string(k), code.decoders[k]);
  TextNode& a = n.add("audit");
  a.set("distance", code.audit.distance);
  a.set("decode_probability", code.audit.decode_probability);
  a.set("zeta_achieved", code.audit.zeta_achieved);
  a.set("xi_achieved", code.audit.xi_achieved);
  a.set("eps_cover", code.audit.eps_cover);
  a.set("decode_bound", code.audit.decode_bound);
  a.set("povm_residual", code.audit.povm_residual);
  a.set("key_bits", code.audit.key_bits);
  a.set("distances", code.audit.distances);
  a.set("errors", code.audit.errors);
  a.set("decode_probabilities", code.audit.decode_probabilities);
  a.set("bound_ok", static_cast<long>(code.audit.bound_ok));
  return n;
}

StegoCcCode stego_cc_from_text(const TextNode& n) {
  if (n.kind != "stego_cc") fail("expected stego_cc, found " + n.kind);
  StegoCcCode code;
  code.cover_messages = static_cast<int>(n.get_long("cover_messages"));
  code.cypher_messages = static_cast<int>(n.get_long("cypher_messages"));
  code.keys = static_cast<int>(n.get_long("keys"));
  code.resolvability = n.get_long("resolvability") != 0;
  code.warning = n.get_long("warning") != 0;
  for (int w = 0; w < code.cover_messages; ++w) {
    const TextNode& s = n.child("subcode", std::to_string(w));
    KeyedSubcode sub;
    sub.messages = code.cypher_messages;
    sub.keys = code.keys;
    sub.defect = s.get_double("defect");
    sub.error = s.get_double("error");
    for (int k = 0; k < code.keys; ++k) {
      std::vector<DensityMatrix> inputs;
      for (int wb = 0; wb < code.cypher_messages; ++wb) {
        inputs.emplace_back(get_matrix(s, "input_" + std::to_string(k) + "_" + std::to_string(wb)),
                            1e-9);
      }
      sub.inputs.push_back(std::move(inputs));
      sub.decoders.push_back(get_povm(s, "decoder_" + std::to_string(k)));
    }
    code.per_message.push_back(std::move(sub));
  }
  for (int k = 0; k < code.keys; ++k) code.decoders.push_back(get_povm(n, "joint_" + std::to_string(k)));
  const TextNode& a = n.child("audit");
  code.audit.distance = a.get_double("distance");
  code.audit.decode_probability = a.get_double("decode_probability");
  code.audit.zeta_achieved = a.get_double("zeta_achieved");
  code.audit.xi_achieved = a.get_double("xi_achieved");
  code.audit.eps_cover = a.get_double("eps_cover");
  code.audit.decode_bound = a.get_double("decode_bound");
  code.audit.povm_residual = a.get_double("povm_residual");
  code.audit.key_bits = a.get_double("key_bits");
  code.audit.distances = a.get_doubles("distances");
  code.audit.errors = a.get_doubles("errors");
  code.audit.decode_probabilities = a.get_doubles("decode_probabilities");
  code.audit.bound_ok = a.get_long("bound_ok") != 0;
  return code;
}

TextNode to_text(const StegoQcCcCode& code) {
  TextNode n{"stego_qc_cc", "", {}, {}};
  n.set("messages", code.messages);
  n.set("cypher_messages", code.cypher_messages);
  n.set("pj", code.split.pj);
  n.set("hash", code.hash.f);
  n.set("bucket_sizes", code.bucket_sizes);
  n.set("hash_defect", code.hash_defect);
  n.set("twirl_defect", code.twirl_defect);
  n.set("cypher_decode", code.cypher_decode);
  n.set("recovery_constant", code.recovery_constant);
  n.set("stego_recovery", code.stego_recovery);
  n.set("max_distance", code.max_distance);
  n.set("distance_bound", code.distance_bound);
  n.set("bound_ok", static_cast<long>(code.bound_ok));
  for (std::size_t j = 0; j < code.split.unitaries.size(); ++j) {
    put_matrix(n, "unitary_" + std::to_string(j), code.split.unitaries[j]);
  }
  for (std::size_t w = 0; w < code.encoders.size(); ++w) {
    put_channel(n, "encoder_" + std::to_string(w), code.encoders[w]);
  }
  put_channel(n, "decoder", code.decoder);
  return n;
}

TextNode to_text(const StegoEsRsCode& code) {
  TextNode n{"stego_es_rs", "", {}, {}};
  n.set("messages", code.messages);
  n.set("cypher_messages", code.cypher_messages);
  n.set("schmidt_weights", code.schmidt_weights);
  n.set("hash", code.hash.f);
  n.set("eps_cover", code.eps_cover);
  n.set("zeta_achieved", code.zeta_achieved);
  n.set("fidelity", code.fidelity);
  n.set("fidelity_bound", code.fidelity_bound);
  n.set("output_gap", code.output_gap);
  n.set("bound_ok", static_cast<long>(code.bound_ok));
  put_povm(n, "alice", code.alice);
  put_povm(n, "bob", code.bob);
  put_matrix(n, "final_state", code.final_state);
  return n;
}

}  // namespace qsteg
