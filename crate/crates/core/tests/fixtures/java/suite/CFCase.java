package test.suite;

public class CFCase {
    private int hits;

    public int count() {
        hits++;
        return hits;
    }
}
