#include <cstdio>

int main() {
  std::puts("rivid: subcommands not wired yet");
  return 1;
}
