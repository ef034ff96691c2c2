#include <iostream>

#include "mediadisc/tools/pipeline.hpp"

int main(int argc, char** argv) { return mediadisc::tools::run_cli(argc, argv, std::cout, std::cerr); }
