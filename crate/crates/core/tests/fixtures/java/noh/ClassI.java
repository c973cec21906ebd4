package test.noh;

public class ClassI extends ClassH {
    public void touch() {
    }
}
