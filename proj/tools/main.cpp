#include "cli/app.hpp"

int main(int argc, char** argv) { return owg::cli::run(argc, argv); }
