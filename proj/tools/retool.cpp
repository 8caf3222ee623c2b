#include "retool/cli.hpp"

int main(int argc, char** argv) { return retool::run(argc, argv); }
