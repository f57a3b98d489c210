// xposit: standalone Xposit assembler / disassembler.
//
//   xposit asm prog.s       one 0xXXXXXXXX word per instruction
//   xposit dis words.hex    one instruction per word

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "xposit_io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Xposit RISC-V extension assembler and disassembler"};
  app.require_subcommand(1);
  std::string asm_input = "-", dis_input = "-";
  auto* asm_cmd = app.add_subcommand("asm", "Assemble instructions to hex words");
  asm_cmd->add_option("file", asm_input, "Assembly file, '-' for stdin");
  auto* dis_cmd = app.add_subcommand("dis", "Disassemble hex words");
  dis_cmd->add_option("file", dis_input, "Hex word file, '-' for stdin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const std::string& path = asm_cmd->parsed() ? asm_input : dis_input;
  auto run = asm_cmd->parsed() ? positron::tools::assemble_stream : positron::tools::disassemble_stream;
  if (path == "-") return run(std::cin, "<stdin>", std::cout, std::cerr);
  std::ifstream in(path);
  if (!in) {
    std::cerr << "xposit: cannot open " << path << '\n';
    return 1;
  }
  return run(in, path, std::cout, std::cerr);
}
