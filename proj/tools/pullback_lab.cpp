#include "pblab/cli.hpp"

int main(int argc, char** argv) { return pblab::cli::run(argc, argv); }
