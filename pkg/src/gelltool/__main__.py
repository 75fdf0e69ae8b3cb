from gelltool.cli import main

raise SystemExit(main())
