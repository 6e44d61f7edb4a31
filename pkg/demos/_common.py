from pathlib import Path

OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)
