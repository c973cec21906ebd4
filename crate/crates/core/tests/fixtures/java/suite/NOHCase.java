package test.suite;

public class NOHCase {
    private int hits;

    public int count() {
        hits++;
        return hits;
    }
}
