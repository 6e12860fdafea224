from soliton.cli import main

main()
