#pragma once

// Line-oriented assembly / disassembly shared by `positron asm|dis` and
// the standalone `xposit` tool.

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "positron/xposit.hpp"

namespace positron::tools {

inline std::string hex_word(std::uint32_t w) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08X", w);
  return buf;
}

/// One hex word per input instruction. Returns 0, or 1 if any line failed.
inline int assemble_stream(std::istream& in, const std::string& name, std::ostream& out, std::ostream& err) {
  int status = 0;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (xposit::is_blank(line)) continue;
    try {
      out << hex_word(xposit::assemble(line)) << '\n';
    } catch (const xposit::codec_error& e) {
      err << name << ':' << lineno << ": error: " << e.what() << '\n';
      status = 1;
    }
  }
  return status;
}

/// Words may be separated by any whitespace; '#' starts a comment.
inline int disassemble_stream(std::istream& in, const std::string& name, std::ostream& out, std::ostream& err) {
  int status = 0;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    std::string tok;
    while (words >> tok) {
      std::size_t used = 0;
      unsigned long long value = 0;
      try {
        value = std::stoull(tok, &used, 16);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || value > 0xFFFFFFFFull) {
        err << name << ':' << lineno << ": error: not a 32-bit hex word: " << tok << '\n';
        status = 1;
        continue;
      }
      try {
        out << xposit::disassemble(static_cast<std::uint32_t>(value)) << '\n';
      } catch (const xposit::codec_error& e) {
        err << name << ':' << lineno << ": error: " << e.what();
        if (!e.field().empty()) err << " [field " << e.field() << ']';
        err << '\n';
        status = 1;
      }
    }
  }
  return status;
}

}  // namespace positron::tools
