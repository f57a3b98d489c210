#pragma once

// Encoder, decoder, assembler and disassembler for the Xposit custom RISC-V
// extension (major opcode custom-0, 0x0B).
//
// Word layouts:
//   loads   imm[11:0] | rs1 | funct3 | rd       | 0x0B   (PLW 0x1, PLD 0x5)
//   stores  imm[11:5] | rs2 | rs1 | funct3 | imm[4:0] | 0x0B (PSW 0x3, PSD 0x6)
//   compute funct5 | 0b10 | rs2 | rs1 | 000 | rd | 0x0B
// Compute rows that do not use a register slot fix that field to zero.
//
// Assembly syntax follows RISC-V operand order. Posit registers are
// p0..p31, integer registers x0..x31:
//   pld p2, 8(x10)      psd p2, -16(x10)
//   padd.s p3, p1, p2   psqrt.s p1, p2      qmadd.s p1, p2
//   qclr.s              qround.s p4         pcvt.w.s x1, p2

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace positron::xposit {

inline constexpr std::uint32_t major_opcode = 0x0B;

enum class mnemonic : std::uint8_t {
  plw, pld, psw, psd,
  padd_s, psub_s, pmul_s, pdiv_s, pmin_s, pmax_s, psqrt_s,
  qmadd_s, qmsub_s, qclr_s, qneg_s, qround_s,
  pcvt_w_s, pcvt_wu_s, pcvt_l_s, pcvt_lu_s,
  pcvt_s_w, pcvt_s_wu, pcvt_s_l, pcvt_s_lu,
  psgnj_s, psgnjn_s, psgnjx_s,
  pmv_x_w, pmv_w_x,
  peq_s, plt_s, ple_s,
};

enum class layout : std::uint8_t {
  load,      // rd, imm(rs1)
  store,     // rs2, imm(rs1)
  rd_rs1_rs2,
  rd_rs1,
  rs1_rs2,   // quire multiply-accumulate: no destination
  rd_only,   // quire round
  none,      // quire clear / negate
};

enum class reg_class : std::uint8_t { unused, posit, integer };

struct opcode_info {
  mnemonic op;
  std::string_view name;
  layout form;
  std::uint32_t funct;  // funct3 for loads/stores, funct5 for compute rows
  reg_class rd, rs1, rs2;
};

// One row per instruction, in table order.
inline constexpr std::array<opcode_info, 32> opcode_table{{
    {mnemonic::plw, "plw", layout::load, 0x1, reg_class::posit, reg_class::integer, reg_class::unused},
    {mnemonic::pld, "pld", layout::load, 0x5, reg_class::posit, reg_class::integer, reg_class::unused},
    {mnemonic::psw, "psw", layout::store, 0x3, reg_class::unused, reg_class::integer, reg_class::posit},
    {mnemonic::psd, "psd", layout::store, 0x6, reg_class::unused, reg_class::integer, reg_class::posit},
    {mnemonic::padd_s, "padd.s", layout::rd_rs1_rs2, 0x00, reg_class::posit, reg_class::posit, reg_class::posit},
    {mnemonic::psub_s, "psub.s", layout::rd_rs1_rs2, 0x01, reg_class::posit, reg_class::posit, reg_class::posit},
    {mnemonic::pmul_s, "pmul.s", layout::rd_rs1_rs2, 0x02, reg_class::posit, reg_class::posit, reg_class::posit},
    {mnemonic::pdiv_s, "pdiv.s", layout::rd_rs1_rs2, 0x03, reg_class::posit, reg_class::posit, reg_class::posit},
    {mnemonic::pmin_s, "pmin.s", layout::rd_rs1_rs2, 0x04, reg_class::posit, reg_class::posit, reg_class::posit},
    {mnemonic::pmax_s, "pmax.s", layout::rd_rs1_rs2, 0x05, reg_class::posit, reg_class::posit, reg_class::posit},
    {mnemonic::psqrt_s, "psqrt.s", layout::rd_rs1, 0x06, reg_class::posit, reg_class::posit, reg_class::unused},
    {mnemonic::qmadd_s, "qmadd.s", layout::rs1_rs2, 0x07, reg_class::unused, reg_class::posit, reg_class::posit},
    {mnemonic::qmsub_s, "qmsub.s", layout::rs1_rs2, 0x08, reg_class::unused, reg_class::posit, reg_class::posit},
    {mnemonic::qclr_s, "qclr.s", layout::none, 0x09, reg_class::unused, reg_class::unused, reg_class::unused},
    {mnemonic::qneg_s, "qneg.s", layout::none, 0x0A, reg_class::unused, reg_class::unused, reg_class::unused},
    {mnemonic::qround_s, "qround.s", layout::rd_only, 0x0B, reg_class::posit, reg_class::unused, reg_class::unused},
    {mnemonic::pcvt_w_s, "pcvt.w.s", layout::rd_rs1, 0x0C, reg_class::integer, reg_class::posit, reg_class::unused},
    {mnemonic::pcvt_wu_s, "pcvt.wu.s", layout::rd_rs1, 0x0D, reg_class::integer, reg_class::posit, reg_class::unused},
    {mnemonic::pcvt_l_s, "pcvt.l.s", layout::rd_rs1, 0x0E, reg_class::integer, reg_class::posit, reg_class::unused},
    {mnemonic::pcvt_lu_s, "pcvt.lu.s", layout::rd_rs1, 0x0F, reg_class::integer, reg_class::posit, reg_class::unused},
    {mnemonic::pcvt_s_w, "pcvt.s.w", layout::rd_rs1, 0x10, reg_class::posit, reg_class::integer, reg_class::unused},
    {mnemonic::pcvt_s_wu, "pcvt.s.wu", layout::rd_rs1, 0x11, reg_class::posit, reg_class::integer, reg_class::unused},
    {mnemonic::pcvt_s_l, "pcvt.s.l", layout::rd_rs1, 0x12, reg_class::posit, reg_class::integer, reg_class::unused},
    {mnemonic::pcvt_s_lu, "pcvt.s.lu", layout::rd_rs1, 0x13, reg_class::posit, reg_class::integer, reg_class::unused},
    {mnemonic::psgnj_s, "psgnj.s", layout::rd_rs1_rs2, 0x14, reg_class::posit, reg_class::posit, reg_class::posit},
    {mnemonic::psgnjn_s, "psgnjn.s", layout::rd_rs1_rs2, 0x15, reg_class::posit, reg_class::posit, reg_class::posit},
    {mnemonic::psgnjx_s, "psgnjx.s", layout::rd_rs1_rs2, 0x16, reg_class::posit, reg_class::posit, reg_class::posit},
    {mnemonic::pmv_x_w, "pmv.x.w", layout::rd_rs1, 0x17, reg_class::integer, reg_class::posit, reg_class::unused},
    {mnemonic::pmv_w_x, "pmv.w.x", layout::rd_rs1, 0x18, reg_class::posit, reg_class::integer, reg_class::unused},
    {mnemonic::peq_s, "peq.s", layout::rd_rs1_rs2, 0x19, reg_class::integer, reg_class::posit, reg_class::posit},
    {mnemonic::plt_s, "plt.s", layout::rd_rs1_rs2, 0x1A, reg_class::integer, reg_class::posit, reg_class::posit},
    {mnemonic::ple_s, "ple.s", layout::rd_rs1_rs2, 0x1B, reg_class::integer, reg_class::posit, reg_class::posit},
}};

inline constexpr const opcode_info& info(mnemonic op) { return opcode_table[static_cast<std::size_t>(op)]; }

/// Operands that are present are exactly the ones the instruction uses.
struct instruction {
  mnemonic op = mnemonic::qclr_s;
  std::optional<std::uint8_t> rd, rs1, rs2;
  std::optional<std::int32_t> imm;

  friend bool operator==(const instruction&, const instruction&) = default;
};

class codec_error : public std::runtime_error {
 public:
  enum class kind { not_xposit, invalid_encoding, operand_out_of_range, bad_operands, unknown_mnemonic, parse_error };

  codec_error(kind k, std::string field, const std::string& message, int column = -1)
      : std::runtime_error(message), kind_(k), field_(std::move(field)), column_(column) {}

  kind error_kind() const { return kind_; }
  /// Offending encoding field or operand slot, empty when not applicable.
  const std::string& field() const { return field_; }
  /// 1-based column in assembly text, -1 outside the assembler.
  int column() const { return column_; }

 private:
  kind kind_;
  std::string field_;
  int column_;
};

namespace detail {

constexpr bool uses_rd(layout f) {
  return f == layout::load || f == layout::rd_rs1_rs2 || f == layout::rd_rs1 || f == layout::rd_only;
}
constexpr bool uses_rs1(layout f) { return f != layout::none && f != layout::rd_only; }
constexpr bool uses_rs2(layout f) { return f == layout::store || f == layout::rd_rs1_rs2 || f == layout::rs1_rs2; }
constexpr bool uses_imm(layout f) { return f == layout::load || f == layout::store; }

inline void check_slot(const std::optional<std::uint8_t>& value, bool used, const char* slot, std::string_view name) {
  if (used && !value) {
    throw codec_error(codec_error::kind::bad_operands, slot, std::string(name) + ": missing operand " + slot);
  }
  if (!used && value) {
    throw codec_error(codec_error::kind::bad_operands, slot, std::string(name) + ": takes no " + slot + " operand");
  }
  if (value && *value > 31) {
    throw codec_error(codec_error::kind::operand_out_of_range, slot,
                      std::string(name) + ": register " + slot + " out of range: " + std::to_string(*value));
  }
}

}  // namespace detail

inline std::uint32_t encode(const instruction& in) {
  const auto& row = info(in.op);
  detail::check_slot(in.rd, detail::uses_rd(row.form), "rd", row.name);
  detail::check_slot(in.rs1, detail::uses_rs1(row.form), "rs1", row.name);
  detail::check_slot(in.rs2, detail::uses_rs2(row.form), "rs2", row.name);
  const bool wants_imm = detail::uses_imm(row.form);
  if (wants_imm != in.imm.has_value()) {
    throw codec_error(codec_error::kind::bad_operands, "imm",
                      std::string(row.name) + (wants_imm ? ": missing immediate" : ": takes no immediate"));
  }
  if (in.imm && (*in.imm < -2048 || *in.imm > 2047)) {
    throw codec_error(codec_error::kind::operand_out_of_range, "imm",
                      std::string(row.name) + ": immediate out of 12-bit range: " + std::to_string(*in.imm));
  }
  const std::uint32_t rd = in.rd.value_or(0);
  const std::uint32_t rs1 = in.rs1.value_or(0);
  const std::uint32_t rs2 = in.rs2.value_or(0);
  const std::uint32_t imm = static_cast<std::uint32_t>(in.imm.value_or(0)) & 0xFFF;
  switch (row.form) {
    case layout::load:
      return imm << 20 | rs1 << 15 | row.funct << 12 | rd << 7 | major_opcode;
    case layout::store:
      return (imm >> 5) << 25 | rs2 << 20 | rs1 << 15 | row.funct << 12 | (imm & 0x1F) << 7 | major_opcode;
    default:
      return row.funct << 27 | 0x2u << 25 | rs2 << 20 | rs1 << 15 | rd << 7 | major_opcode;
  }
}

inline instruction decode(std::uint32_t word) {
  auto fail = [word](const char* field, const std::string& why) {
    char hex[16];
    std::snprintf(hex, sizeof hex, "0x%08X", word);
    return codec_error(codec_error::kind::invalid_encoding, field, std::string("invalid Xposit encoding ") + hex + ": " + why);
  };
  if ((word & 0x7F) != major_opcode) {
    throw codec_error(codec_error::kind::not_xposit, "opcode", "not an Xposit instruction (opcode " + std::to_string(word & 0x7F) + ")");
  }
  const std::uint32_t rd = (word >> 7) & 0x1F;
  const std::uint32_t funct3 = (word >> 12) & 0x7;
  const std::uint32_t rs1 = (word >> 15) & 0x1F;
  const std::uint32_t rs2 = (word >> 20) & 0x1F;

  instruction in;
  if (funct3 != 0) {
    const auto row = std::find_if(opcode_table.begin(), opcode_table.end(), [funct3](const opcode_info& r) {
      return (r.form == layout::load || r.form == layout::store) && r.funct == funct3;
    });
    if (row == opcode_table.end()) throw fail("funct3", "unassigned funct3 " + std::to_string(funct3));
    in.op = row->op;
    in.rs1 = static_cast<std::uint8_t>(rs1);
    if (row->form == layout::load) {
      in.rd = static_cast<std::uint8_t>(rd);
      in.imm = static_cast<std::int32_t>(word) >> 20;
    } else {
      in.rs2 = static_cast<std::uint8_t>(rs2);
      const std::uint32_t raw = ((word >> 25) << 5) | rd;
      in.imm = static_cast<std::int32_t>(raw << 20) >> 20;
    }
    return in;
  }

  if (((word >> 25) & 0x3) != 0x2) throw fail("funct2", "bits 26-25 must be 0b10");
  const std::uint32_t funct5 = word >> 27;
  const auto row = std::find_if(opcode_table.begin(), opcode_table.end(), [funct5](const opcode_info& r) {
    return r.form != layout::load && r.form != layout::store && r.funct == funct5;
  });
  if (row == opcode_table.end()) throw fail("funct5", "unassigned funct5 " + std::to_string(funct5));
  in.op = row->op;
  if (detail::uses_rd(row->form)) in.rd = static_cast<std::uint8_t>(rd);
  else if (rd != 0) throw fail("rd", std::string(row->name) + " requires rd = 0");
  if (detail::uses_rs1(row->form)) in.rs1 = static_cast<std::uint8_t>(rs1);
  else if (rs1 != 0) throw fail("rs1", std::string(row->name) + " requires rs1 = 0");
  if (detail::uses_rs2(row->form)) in.rs2 = static_cast<std::uint8_t>(rs2);
  else if (rs2 != 0) throw fail("rs2", std::string(row->name) + " requires rs2 = 0");
  return in;
}

// ---- text ---------------------------------------------------------------

inline std::string disassemble(const instruction& in) {
  const auto& row = info(in.op);
  auto reg = [](reg_class c, std::optional<std::uint8_t> r) {
    return std::string(c == reg_class::integer ? "x" : "p") + std::to_string(r.value_or(0));
  };
  std::string out(row.name);
  switch (row.form) {
    case layout::load:
      return out + " " + reg(row.rd, in.rd) + ", " + std::to_string(in.imm.value_or(0)) + "(" + reg(row.rs1, in.rs1) + ")";
    case layout::store:
      return out + " " + reg(row.rs2, in.rs2) + ", " + std::to_string(in.imm.value_or(0)) + "(" + reg(row.rs1, in.rs1) + ")";
    case layout::rd_rs1_rs2:
      return out + " " + reg(row.rd, in.rd) + ", " + reg(row.rs1, in.rs1) + ", " + reg(row.rs2, in.rs2);
    case layout::rd_rs1:
      return out + " " + reg(row.rd, in.rd) + ", " + reg(row.rs1, in.rs1);
    case layout::rs1_rs2:
      return out + " " + reg(row.rs1, in.rs1) + ", " + reg(row.rs2, in.rs2);
    case layout::rd_only:
      return out + " " + reg(row.rd, in.rd);
    case layout::none:
      return out;
  }
  return out;
}

inline std::string disassemble(std::uint32_t word) { return disassemble(decode(word)); }

namespace detail {

class line_parser {
 public:
  explicit line_parser(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw codec_error(codec_error::kind::parse_error, "", "column " + std::to_string(pos_ + 1) + ": " + what,
                      static_cast<int>(pos_ + 1));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  std::size_t column() const { return pos_ + 1; }

  std::string word() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' || text_[pos_] == '_')) ++pos_;
    std::string w(text_.substr(start, pos_ - start));
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return w;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::uint8_t reg(reg_class want) {
    skip_space();
    const char prefix = want == reg_class::integer ? 'x' : 'p';
    if (pos_ >= text_.size() || std::tolower(static_cast<unsigned char>(text_[pos_])) != prefix) {
      fail(std::string("expected ") + (want == reg_class::integer ? "integer register x0-x31" : "posit register p0-p31"));
    }
    ++pos_;
    const std::size_t start = pos_;
    unsigned value = 0;
    const auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (res.ec != std::errc() || res.ptr == text_.data() + start) fail("expected register number");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    if (value > 31) {
      pos_ = start;
      fail("register number out of range: " + std::to_string(value));
    }
    return static_cast<std::uint8_t>(value);
  }

  std::int32_t immediate() {
    skip_space();
    const std::size_t start = pos_;
    bool neg = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      neg = text_[pos_] == '-';
      ++pos_;
    }
    int base = 10;
    if (pos_ + 1 < text_.size() && text_[pos_] == '0' && (text_[pos_ + 1] == 'x' || text_[pos_ + 1] == 'X')) {
      base = 16;
      pos_ += 2;
    }
    long long value = 0;
    const auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value, base);
    if (res.ec != std::errc() || res.ptr == text_.data() + pos_) {
      pos_ = start;
      fail("expected immediate");
    }
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    if (neg) value = -value;
    if (value < -2048 || value > 2047) {
      pos_ = start;
      fail("immediate out of 12-bit range: " + std::to_string(value));
    }
    return static_cast<std::int32_t>(value);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses one instruction; `#` starts a comment.
inline instruction parse(std::string_view line) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  detail::line_parser p(line);
  const std::size_t name_column = (p.skip_space(), p.column());
  const std::string name = p.word();
  if (name.empty()) p.fail("expected mnemonic");
  const auto row = std::find_if(opcode_table.begin(), opcode_table.end(),
                                [&](const opcode_info& r) { return r.name == name; });
  if (row == opcode_table.end()) {
    throw codec_error(codec_error::kind::unknown_mnemonic, "", "column " + std::to_string(name_column) + ": unknown mnemonic '" + name + "'",
                      static_cast<int>(name_column));
  }
  instruction in;
  in.op = row->op;
  switch (row->form) {
    case layout::load:
      in.rd = p.reg(row->rd);
      p.expect(',');
      in.imm = p.immediate();
      p.expect('(');
      in.rs1 = p.reg(row->rs1);
      p.expect(')');
      break;
    case layout::store:
      in.rs2 = p.reg(row->rs2);
      p.expect(',');
      in.imm = p.immediate();
      p.expect('(');
      in.rs1 = p.reg(row->rs1);
      p.expect(')');
      break;
    case layout::rd_rs1_rs2:
      in.rd = p.reg(row->rd);
      p.expect(',');
      in.rs1 = p.reg(row->rs1);
      p.expect(',');
      in.rs2 = p.reg(row->rs2);
      break;
    case layout::rd_rs1:
      in.rd = p.reg(row->rd);
      p.expect(',');
      in.rs1 = p.reg(row->rs1);
      break;
    case layout::rs1_rs2:
      in.rs1 = p.reg(row->rs1);
      p.expect(',');
      in.rs2 = p.reg(row->rs2);
      break;
    case layout::rd_only:
      in.rd = p.reg(row->rd);
      break;
    case layout::none:
      break;
  }
  if (!p.at_end()) p.fail("unexpected trailing text");
  return in;
}

inline std::uint32_t assemble(std::string_view line) { return encode(parse(line)); }

/// True for blank lines and comment-only lines.
inline bool is_blank(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace positron::xposit
